"""
Shared fixtures: small grids, seeded random fields and run configurations
writing into the pytest temporary directory.
"""

import numpy as np
import pytest

from config.enums import BoundaryCondition, DensityProfile
from config.run_config import (
    AuditSpec,
    FlowSpec,
    GridSpec,
    ModelSpec,
    OutputSpec,
    ProfileSpec,
    RunConfig,
    TimeSpec,
)
from models import Grid, ModelParams, ScalarField, State, VectorField
from services.grid_operators import fill_ghosts
from services.transport_solver import fill_state_ghosts


@pytest.fixture(autouse=True)
def _no_output_root(monkeypatch):
    monkeypatch.delenv("CNS_OUTPUT_ROOT", raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid2():
    return Grid((1.0, 1.0), (8, 8))


@pytest.fixture
def grid3():
    return Grid((1.0, 1.0, 1.0), (4, 4, 4))


@pytest.fixture(params=["2d", "3d"])
def small_grid(request):
    if request.param == "2d":
        return Grid((1.0, 1.5), (8, 6))
    return Grid((1.0, 1.0, 1.0), (4, 4, 4))


@pytest.fixture
def params():
    return ModelParams(p=2.2, kappa=1.0, epsilon=0.05, phi_gradient=(0.0, -0.1))


def random_scalar(grid: Grid, rng, low: float = 0.5, high: float = 1.5) -> ScalarField:
    """Random positive cell values with Neumann ghosts."""
    field = ScalarField.from_interior(grid, rng.uniform(low, high, grid.cells))
    return fill_ghosts(field, BoundaryCondition.NEUMANN_ZERO)


def random_velocity(grid: Grid, rng) -> VectorField:
    """Random velocity unknowns with no-slip ghosts."""
    flat = rng.standard_normal(grid.velocity_unknown_count)
    return fill_ghosts(VectorField.unpack(grid, flat), BoundaryCondition.DIRICHLET_ZERO)


def constant_scalar(grid: Grid, value: float) -> ScalarField:
    return fill_ghosts(
        ScalarField.from_interior(grid, np.full(grid.cells, float(value))),
        BoundaryCondition.NEUMANN_ZERO,
    )


def make_state(grid: Grid, n: ScalarField, c: ScalarField, u=None) -> State:
    return fill_state_ghosts(State.at_rest(grid, n, c, u))


def small_config(tmp_path, name: str = "small", **overrides) -> RunConfig:
    """
    16^2 run with the default physics, short horizon and no catalogue.

    Keyword overrides replace whole sections (grid=GridSpec(...), time=TimeSpec(...), ...).
    """
    sections = dict(
        name=name,
        grid=GridSpec(extents=(1.0, 1.0), cells=(16, 16)),
        model=ModelSpec(p=2.2, kappa=1.0, epsilon=0.05, phi_gradient=(0.0, -0.1)),
        n0=ProfileSpec(kind=DensityProfile.GAUSSIAN, background=0.0, amplitude=1.0, width=0.1),
        c0=ProfileSpec(kind=DensityProfile.CONSTANT, background=1.0),
        time=TimeSpec(t_end=0.02, report_interval=0.005),
        flow=FlowSpec(),
        audit=AuditSpec(),
        output=OutputSpec(directory=str(tmp_path / name), catalogue=False),
    )
    sections.update(overrides)
    return RunConfig(**sections)
