"""
Run configuration: a frozen dataclass tree loaded from a TOML file.

The TOML keys are exactly the field names below, grouped in the tables
[grid], [model], [initial.n0], [initial.c0], [initial.u0], [time], [flow],
[audit] and [output]. A top-level `name` labels the run.
"""

import json
import os
import tomllib
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

from config.constants import AuditConstants, SolverConstants
from config.enums import DensityProfile, SolveMethod, VelocityProfile
from models.grid import Grid
from models.params import ModelParams
from models.sensitivity import get_pair
from utils.exceptions import ConfigError

load_dotenv()


@dataclass(frozen=True)
class GridSpec:
    extents: tuple[float, ...] = (1.0, 1.0)
    cells: tuple[int, ...] = (64, 64)

    @property
    def dim(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class ModelSpec:
    p: float = 2.2
    kappa: float = 1.0
    epsilon: float = 0.05
    pair: str = "linear"
    pair_coefficients: Optional[dict[str, float]] = None
    phi_gradient: tuple[float, ...] = (0.0, -0.1)


@dataclass(frozen=True)
class ProfileSpec:
    """Scalar initial profile: constant `background`, plus a Gaussian bump."""

    kind: DensityProfile = DensityProfile.CONSTANT
    background: float = 1.0
    amplitude: float = 0.0
    width: float = 0.1
    center: Optional[tuple[float, ...]] = None  # box centre when omitted


@dataclass(frozen=True)
class VelocitySpec:
    kind: VelocityProfile = VelocityProfile.ZERO
    amplitude: float = 0.0


@dataclass(frozen=True)
class TimeSpec:
    t_end: float = 1.0
    cfl_safety: float = 0.5
    report_interval: float = 0.05
    snapshot_interval: float = 0.0  # 0 disables snapshots
    max_steps: Optional[int] = None


@dataclass(frozen=True)
class FlowSpec:
    enabled: bool = True
    poisson_method: SolveMethod = SolveMethod.DIRECT
    yosida_method: SolveMethod = SolveMethod.DIRECT
    poisson_tol: float = SolverConstants.POISSON_TOL
    yosida_tol: float = SolverConstants.YOSIDA_TOL


@dataclass(frozen=True)
class AuditSpec:
    r: float = AuditConstants.DEFAULT_R
    growth_window: float = AuditConstants.GROWTH_WINDOW
    growth_factor: float = AuditConstants.GROWTH_FACTOR
    weak_residual: bool = False  # stream every step into the weak-form residual


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "runs/default"
    vtk: bool = False
    plot: bool = False
    catalogue: bool = True


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, validated on construction."""

    name: str = "default"
    grid: GridSpec = field(default_factory=GridSpec)
    model: ModelSpec = field(default_factory=ModelSpec)
    n0: ProfileSpec = field(
        default_factory=lambda: ProfileSpec(
            kind=DensityProfile.GAUSSIAN, background=0.0, amplitude=1.0, width=0.1
        )
    )
    c0: ProfileSpec = field(default_factory=ProfileSpec)
    u0: VelocitySpec = field(default_factory=VelocitySpec)
    time: TimeSpec = field(default_factory=TimeSpec)
    flow: FlowSpec = field(default_factory=FlowSpec)
    audit: AuditSpec = field(default_factory=AuditSpec)
    output: OutputSpec = field(default_factory=OutputSpec)

    def __post_init__(self):
        validate_run_config(self)

    def build_grid(self) -> Grid:
        return Grid(self.grid.extents, self.grid.cells)

    def build_params(self, s0: float = 1.0) -> ModelParams:
        """ModelParams for this run; s0 is filled in once c0 is realized."""
        return ModelParams(
            p=self.model.p,
            kappa=self.model.kappa,
            epsilon=self.model.epsilon,
            sensitivity=get_pair(self.model.pair, self.model.pair_coefficients),
            phi_gradient=tuple(self.model.phi_gradient),
            s0=s0,
        )

    def output_path(self) -> Path:
        """Output directory, relative paths resolved under CNS_OUTPUT_ROOT."""
        path = Path(self.output.directory)
        root = os.getenv("CNS_OUTPUT_ROOT")
        if root and not path.is_absolute():
            path = Path(root) / path
        return path

    def with_epsilon(self, epsilon: float, directory: str) -> "RunConfig":
        """Copy for one member of an epsilon family."""
        model = ModelSpec(**{**_shallow(self.model), "epsilon": float(epsilon)})
        output = OutputSpec(**{**_shallow(self.output), "directory": directory})
        return RunConfig(
            **{
                **_shallow(self),
                "name": f"{self.name}-eps{epsilon:g}",
                "model": model,
                "output": output,
            }
        )

    def with_time(self, **changes) -> "RunConfig":
        time = TimeSpec(**{**_shallow(self.time), **changes})
        return RunConfig(**{**_shallow(self), "time": time})

    def to_json(self) -> str:
        """Stable JSON form stored in the run catalogue."""
        return json.dumps(asdict(self), default=_json_default, sort_keys=True)


def _shallow(obj) -> dict:
    return {f.name: getattr(obj, f.name) for f in fields(obj)}


def _json_default(value):
    if isinstance(value, Enum):
        return value.value
    raise TypeError(f"not serializable: {value!r}")


def validate_run_config(config: RunConfig) -> None:
    """
    Check every RunConfig invariant.

    Raises:
        ConfigError: On the first violated invariant
    """
    g = config.grid
    if len(g.extents) != len(g.cells):
        raise ConfigError("grid.extents and grid.cells must have the same length")
    if g.dim not in (2, 3):
        raise ConfigError(f"grid dimension must be 2 or 3, got {g.dim}")
    if len(config.model.phi_gradient) != g.dim:
        raise ConfigError(
            f"model.phi_gradient must have {g.dim} components, got {config.model.phi_gradient}"
        )

    t = config.time
    if not 0.0 < t.cfl_safety <= 1.0:
        raise ConfigError(f"time.cfl_safety must lie in (0, 1], got {t.cfl_safety}")
    if t.t_end <= 0.0:
        raise ConfigError(f"time.t_end must be positive, got {t.t_end}")
    if t.report_interval <= 0.0:
        raise ConfigError("time.report_interval must be positive")
    if t.snapshot_interval < 0.0:
        raise ConfigError("time.snapshot_interval must be >= 0")
    if t.max_steps is not None and t.max_steps <= 0:
        raise ConfigError("time.max_steps must be positive")

    for label, profile in (("n0", config.n0), ("c0", config.c0)):
        if profile.background < 0.0 or profile.amplitude < 0.0:
            raise ConfigError(f"initial.{label} amplitudes must be nonnegative")
        if profile.width <= 0.0:
            raise ConfigError(f"initial.{label}.width must be positive")
        if profile.center is not None and len(profile.center) != g.dim:
            raise ConfigError(f"initial.{label}.center must have {g.dim} components")
    if config.u0.amplitude < 0.0:
        raise ConfigError("initial.u0.amplitude must be nonnegative")

    if config.flow.poisson_tol <= 0.0 or config.flow.yosida_tol <= 0.0:
        raise ConfigError("flow tolerances must be positive")

    a = config.audit
    if a.r < 1.0:
        raise ConfigError(f"audit.r must be >= 1, got {a.r}")
    if not 0.0 < a.growth_window <= 1.0:
        raise ConfigError("audit.growth_window must lie in (0, 1]")
    if a.growth_factor < 1.0:
        raise ConfigError("audit.growth_factor must be >= 1")

    # model parameters and grid validate themselves
    config.build_grid()
    config.build_params()


_ENUM_FIELDS: dict[str, type[Enum]] = {
    "kind": DensityProfile,
    "poisson_method": SolveMethod,
    "yosida_method": SolveMethod,
}


def _build(cls, table: Optional[dict[str, Any]], where: str, enum_fields=None):
    """Instantiate one section dataclass from its TOML table."""
    table = dict(table or {})
    known = {f.name for f in fields(cls)}
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{where}]: {sorted(unknown)}")
    enum_fields = enum_fields or _ENUM_FIELDS
    for key, value in list(table.items()):
        if key in enum_fields:
            try:
                table[key] = enum_fields[key](value)
            except ValueError:
                choices = [e.value for e in enum_fields[key]]
                raise ConfigError(
                    f"[{where}].{key} must be one of {choices}, got {value!r}"
                ) from None
        elif isinstance(value, list):
            table[key] = tuple(value)
    try:
        return cls(**table)
    except TypeError as e:
        raise ConfigError(f"invalid [{where}] table: {e}") from e


def parse_run_config(data: dict[str, Any]) -> RunConfig:
    """
    Build a RunConfig from an already-parsed TOML document.

    Raises:
        ConfigError: On unknown keys, bad enum values or violated invariants
    """
    data = dict(data)
    initial = dict(data.pop("initial", {}) or {})
    unknown_initial = set(initial) - {"n0", "c0", "u0"}
    if unknown_initial:
        raise ConfigError(f"unknown keys in [initial]: {sorted(unknown_initial)}")
    top_level = {"name", "grid", "model", "time", "flow", "audit", "output"}
    unknown = set(data) - top_level
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")

    defaults = RunConfig()
    kwargs: dict[str, Any] = {"name": str(data.get("name", defaults.name))}
    sections = {
        "grid": GridSpec,
        "model": ModelSpec,
        "time": TimeSpec,
        "flow": FlowSpec,
        "audit": AuditSpec,
        "output": OutputSpec,
    }
    for key, cls in sections.items():
        if key in data:
            kwargs[key] = _build(cls, data[key], key)
    if "n0" in initial:
        kwargs["n0"] = _build(ProfileSpec, initial["n0"], "initial.n0")
    if "c0" in initial:
        kwargs["c0"] = _build(ProfileSpec, initial["c0"], "initial.c0")
    if "u0" in initial:
        kwargs["u0"] = _build(
            VelocitySpec, initial["u0"], "initial.u0", {"kind": VelocityProfile}
        )
    return RunConfig(**kwargs)


def load_run_config(path: str | Path) -> RunConfig:
    """
    Load and validate a TOML run configuration.

    Args:
        path: Path to the TOML file

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: If the file is missing, malformed or invalid
    """
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed config {path}: {e}") from e
    return parse_run_config(data)
