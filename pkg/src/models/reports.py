"""
Report dataclasses produced by the estimate auditor and the simulation manager.
"""

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from config.constants import OutputConstants
from config.enums import ExitCode


@dataclass(frozen=True)
class ConditionResult:
    """One structural condition evaluated on the sample grid."""

    name: str
    passed: bool
    worst_s: float  # sample point with the largest violation (or smallest margin)
    worst_value: float
    advisory: bool = False  # advisory conditions never gate a run


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the structural-condition validator for one sensitivity pair."""

    pair_name: str
    s_max: float
    conditions: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions if not c.advisory)

    def failures(self) -> list[ConditionResult]:
        return [c for c in self.conditions if not c.passed and not c.advisory]

    def condition(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class EnergyReport:
    """Functionals and dissipation terms of the energy estimates at one instant."""

    t: float
    mass_n: float
    min_n: float
    max_n: float
    max_c: float
    e_nlogn: float
    e_psi: float
    e_kin: float
    d_plap: float
    d_plap_power: float
    d_hess: float
    d_quart: float
    d_gradu: float
    norm_u_103: float
    norm_n_r: float
    grad_c_quartic: float
    floored_cells: int = 0
    negative_n_cells: int = 0

    @property
    def decay_functional(self) -> float:
        """e_nlogn + e_psi, nonincreasing when the flow is off."""
        return self.e_nlogn + self.e_psi

    @property
    def coupled_functional(self) -> float:
        """e_nlogn + e_psi + e_kin, recorded only (its weight K is unknown)."""
        return self.e_nlogn + self.e_psi + self.e_kin

    def ledger_values(self) -> dict[str, float]:
        return {q: getattr(self, q) for q in OutputConstants.LEDGER_QUANTITIES}

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CumulativeLedger:
    """
    Running trapezoidal time integrals of the dissipation quantities.

    history[q][k] is the cumulative integral of q up to times[k]; the ratio
    r_Q(T) = cumulative(T)/(T+1) is the growth indicator.
    """

    times: list[float] = field(default_factory=list)
    last_values: dict[str, float] = field(default_factory=dict)
    history: dict[str, list[float]] = field(
        default_factory=lambda: {q: [] for q in OutputConstants.LEDGER_QUANTITIES}
    )

    @property
    def quantities(self) -> tuple[str, ...]:
        return OutputConstants.LEDGER_QUANTITIES

    def record(self, report: EnergyReport) -> None:
        """Advance every integral to the report's time."""
        values = report.ledger_values()
        if not self.times:
            for q in self.quantities:
                self.history[q].append(0.0)
        else:
            dt = report.t - self.times[-1]
            for q in self.quantities:
                increment = 0.5 * (self.last_values[q] + values[q]) * dt
                self.history[q].append(self.history[q][-1] + increment)
        self.times.append(report.t)
        self.last_values = values

    def cumulative(self, quantity: str) -> float:
        series = self.history[quantity]
        return series[-1] if series else 0.0

    def ratios(self, quantity: str) -> np.ndarray:
        """r_Q at every recorded time."""
        return np.asarray(self.history[quantity]) / (np.asarray(self.times) + 1.0)

    def snapshot(self) -> dict[str, float]:
        """Current cumulative integral per quantity."""
        return {q: self.cumulative(q) for q in self.quantities}

    def to_arrays(self) -> dict[str, np.ndarray]:
        """Flat array form used by checkpoints."""
        arrays = {"ledger_times": np.asarray(self.times, dtype=float)}
        for q in self.quantities:
            arrays[f"ledger_cum_{q}"] = np.asarray(self.history[q], dtype=float)
            arrays[f"ledger_last_{q}"] = np.asarray(
                self.last_values.get(q, 0.0), dtype=float
            )
        return arrays

    @classmethod
    def from_arrays(cls, arrays) -> "CumulativeLedger":
        ledger = cls()
        ledger.times = [float(t) for t in arrays["ledger_times"]]
        for q in ledger.quantities:
            ledger.history[q] = [float(v) for v in arrays[f"ledger_cum_{q}"]]
        if ledger.times:
            ledger.last_values = {
                q: float(arrays[f"ledger_last_{q}"]) for q in ledger.quantities
            }
        return ledger


@dataclass(frozen=True)
class CheckVerdict:
    """Pass/fail outcome of one auditor check."""

    name: str
    passed: bool
    detail: str = ""
    first_violation: Optional[int] = None
    measured: Optional[float] = None  # e.g. the empirical constant C_hat


@dataclass(frozen=True)
class ExitReport:
    """Summary returned by a completed (or aborted) run."""

    run_id: str
    status: str
    exit_code: ExitCode
    t_final: float
    steps: int
    verdicts: tuple[CheckVerdict, ...] = ()
    output_dir: str = ""
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.exit_code == ExitCode.PASS
