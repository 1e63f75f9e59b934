"""
Stability-bounded time step selection, re-evaluated every step.
"""

import numpy as np

from config.constants import SolverConstants
from models.params import ModelParams
from models.state import State
from services.grid_operators import face_diffusivity, normal_gradients
from services.regularization import consumption_weight
from utils.exceptions import StiffnessAbortError


def dt_constraints(state: State, params: ModelParams) -> dict[str, float]:
    """
    Time-step bound of each explicit term for the current state.

    Ghosts of n and c must be filled. Terms that are inactive (zero velocity,
    flat oxygen, no consumption) report an infinite bound.
    """
    grid = state.grid
    dim = grid.dim
    dx = grid.min_dx
    heat = dx * dx / (2.0 * dim)

    max_diffusivity = max(float(np.max(d)) for d in face_diffusivity(state.n, params.p, params.epsilon))
    bounds = {
        "diffusion_n": heat / max_diffusivity,
        "diffusion_c": heat,
    }

    max_u = state.u.max_abs()
    bounds["advection"] = dx / (max_u + SolverConstants.VELOCITY_TINY) if max_u > 0.0 else np.inf

    # chemotactic drift speed F_eps'(n) chi(c) |grad c|, with F_eps' <= 1
    max_grad_c = max(float(np.max(np.abs(gc))) for gc in normal_gradients(state.c))
    drift = max_grad_c * float(np.max(params.sensitivity.chi(state.c.data)))
    bounds["chemotaxis"] = dx / (dim * drift) if drift > 0.0 else np.inf

    max_n = float(np.max(state.n.interior))
    rate = float(consumption_weight(np.asarray(max_n), params.epsilon)) * params.sensitivity.max_f_prime(
        max(params.s0, float(np.max(state.c.interior)))
    )
    bounds["consumption"] = 1.0 / rate if rate > 0.0 else np.inf
    return bounds


def select_dt(bounds: dict[str, float], cfl_safety: float) -> tuple[float, str]:
    """
    Pick cfl_safety times the smallest bound.

    Raises:
        StiffnessAbortError: If the step falls below the dt floor
    """
    limiting = min(bounds, key=bounds.get)
    dt = cfl_safety * bounds[limiting]
    if not dt >= SolverConstants.DT_FLOOR:
        raise StiffnessAbortError(dt, limiting)
    return dt, limiting


def stable_dt(state: State, params: ModelParams, cfl_safety: float) -> float:
    """Stable explicit time step for the current state."""
    dt, _ = select_dt(dt_constraints(state, params), cfl_safety)
    return dt
