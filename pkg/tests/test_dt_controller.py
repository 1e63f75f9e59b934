import numpy as np
import pytest

from models import Grid, ModelParams, VectorField
from services.dt_controller import dt_constraints, select_dt, stable_dt
from services.scenarios import vortex
from utils.exceptions import StiffnessAbortError

from conftest import constant_scalar, make_state, random_scalar


def test_rest_state_reduces_to_heat_limit(grid2):
    params = ModelParams(p=2.0, kappa=1.0, epsilon=0.1, phi_gradient=(0.0, 0.0), s0=0.0)
    state = make_state(grid2, constant_scalar(grid2, 1.0), constant_scalar(grid2, 0.0))
    bounds = dt_constraints(state, params)
    heat = grid2.min_dx**2 / 4.0
    assert bounds["diffusion_n"] == pytest.approx(heat)
    assert bounds["diffusion_c"] == pytest.approx(heat)
    assert np.isinf(bounds["advection"])
    assert np.isinf(bounds["chemotaxis"])
    assert stable_dt(state, params, 0.5) == pytest.approx(0.5 * heat)


def test_every_constraint_reported(grid2, rng, params):
    u = vortex(grid2, 2.0)
    state = make_state(grid2, random_scalar(grid2, rng), random_scalar(grid2, rng), u)
    bounds = dt_constraints(state, params)
    assert set(bounds) == {"diffusion_n", "diffusion_c", "advection", "chemotaxis", "consumption"}
    assert all(np.isfinite(v) and v > 0.0 for v in bounds.values())
    assert bounds["advection"] == pytest.approx(grid2.min_dx / u.max_abs())


def test_slow_diffusion_shrinks_step(grid2, rng):
    state = make_state(grid2, random_scalar(grid2, rng, 0.0, 5.0), constant_scalar(grid2, 1.0))
    linear = dt_constraints(state, ModelParams(p=2.0, kappa=0.0, epsilon=0.05, phi_gradient=(0.0, 0.0)))
    slow = dt_constraints(state, ModelParams(p=3.0, kappa=0.0, epsilon=0.05, phi_gradient=(0.0, 0.0)))
    assert slow["diffusion_n"] < linear["diffusion_n"]


def test_select_picks_smallest():
    dt, limiting = select_dt({"a": 1.0, "b": 0.25, "c": np.inf}, 0.5)
    assert (dt, limiting) == (0.125, "b")


def test_underflow_aborts():
    with pytest.raises(StiffnessAbortError) as info:
        select_dt({"diffusion_n": 1e-15, "advection": 1.0}, 0.5)
    assert info.value.constraint == "diffusion_n"


def test_zero_velocity_field_is_inactive():
    grid = Grid((1.0, 1.0, 1.0), (4, 4, 4))
    params = ModelParams(p=2.2, kappa=1.0, epsilon=0.05, phi_gradient=(0.0, 0.0, -0.1))
    state = make_state(grid, constant_scalar(grid, 1.0), constant_scalar(grid, 1.0), VectorField.zeros(grid))
    bounds = dt_constraints(state, params)
    assert np.isinf(bounds["advection"])
    assert bounds["diffusion_c"] == pytest.approx(grid.min_dx**2 / 6.0)
