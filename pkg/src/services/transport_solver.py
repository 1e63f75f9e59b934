"""
Tendencies and explicit Euler update of the density n and oxygen c,
composed with the flow step.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from config.enums import BoundaryCondition
from logger import logger
from models.grid import ScalarField, VectorField
from models.params import ModelParams
from models.state import State
from services.flow_solver import FlowSolver
from services.grid_operators import (
    advect_scalar,
    chemotaxis_div,
    fill_ghosts,
    laplacian,
    plaplacian_div,
)
from services.regularization import consumption_weight
from utils.exceptions import BlowUpError


def fill_state_ghosts(state: State) -> State:
    """Neumann ghosts for n and c, no-slip ghosts for u."""
    fill_ghosts(state.n, BoundaryCondition.NEUMANN_ZERO)
    fill_ghosts(state.c, BoundaryCondition.NEUMANN_ZERO)
    fill_ghosts(state.u, BoundaryCondition.DIRICHLET_ZERO)
    fill_ghosts(state.pressure, BoundaryCondition.NEUMANN_ZERO)
    return state


def n_tendency(state: State, params: ModelParams) -> ScalarField:
    """div((|grad n|^2+eps)^((p-2)/2) grad n) - div(n F_eps'(n) chi(c) grad c) - div(u n)."""
    diffusion = plaplacian_div(state.n, params.p, params.epsilon).interior
    chemotaxis = chemotaxis_div(state.n, state.c, params).interior
    advection = advect_scalar(state.n, state.u).interior
    return ScalarField.from_interior(state.grid, diffusion - chemotaxis + advection)


def c_tendency(state: State, params: ModelParams) -> ScalarField:
    """lap c - F_eps(n) f(c) - div(u c)."""
    consumption = consumption_weight(state.n.interior, params.epsilon) * params.sensitivity.f(
        state.c.interior
    )
    diffusion = laplacian(state.c).interior
    advection = advect_scalar(state.c, state.u).interior
    return ScalarField.from_interior(state.grid, diffusion - consumption + advection)


@dataclass(frozen=True)
class EpsilonConsistency:
    """Differences of n_tendency between consecutive epsilons and their log-log slope."""

    eps_values: tuple[float, ...]
    differences: tuple[float, ...]
    slope: float


def epsilon_consistency(
    state: State, params: ModelParams, eps_values: Sequence[float] = (1e-2, 1e-3, 1e-4)
) -> EpsilonConsistency:
    """
    Measure how n_tendency depends on epsilon for a fixed state.

    The slope of log||T(eps_k) - T(eps_k+1)|| against log|eps_k - eps_k+1| is
    close to 1 on smooth data.
    """
    fill_state_ghosts(state)
    volume = state.grid.cell_volume
    tendencies = [n_tendency(state, params.with_epsilon(e)).interior for e in eps_values]
    differences = tuple(
        float(np.sqrt(np.sum((t1 - t2) ** 2) * volume))
        for t1, t2 in zip(tendencies, tendencies[1:])
    )
    gaps = [abs(e1 - e2) for e1, e2 in zip(eps_values, eps_values[1:])]
    slope = float(np.polyfit(np.log(gaps), np.log(differences), 1)[0])
    return EpsilonConsistency(tuple(eps_values), differences, slope)


class TransportSolver:
    """
    Explicit Euler step of the full system.

    n and c are advanced from the old state; the velocity comes from the flow
    solver (or stays at rest when the flow is disabled).
    """

    def __init__(self, flow: Optional[FlowSolver] = None):
        self.flow = flow

    def step(self, state: State, params: ModelParams, dt: float) -> State:
        """
        Advance the state by dt.

        Raises:
            BlowUpError: If any field becomes NaN or infinite
        """
        fill_state_ghosts(state)
        grid = state.grid
        dn = n_tendency(state, params).interior
        dc = c_tendency(state, params).interior

        n_new = fill_ghosts(
            ScalarField.from_interior(grid, state.n.interior + dt * dn),
            BoundaryCondition.NEUMANN_ZERO,
        )
        c_new = fill_ghosts(
            ScalarField.from_interior(grid, state.c.interior + dt * dc),
            BoundaryCondition.NEUMANN_ZERO,
        )
        if self.flow is not None:
            u_new, pressure = self.flow.ns_step(state.u, state.n, params, dt)
            fill_ghosts(pressure, BoundaryCondition.NEUMANN_ZERO)
        else:
            u_new = VectorField.zeros(grid)
            pressure = ScalarField.zeros(grid)

        new_state = State(
            t=state.t + dt,
            n=n_new,
            c=c_new,
            u=u_new,
            pressure=pressure,
            step=state.step + 1,
        )
        bad = new_state.first_non_finite()
        if bad is not None:
            logger.error(f"Non-finite values in '{bad}' after step {new_state.step}")
            raise BlowUpError(new_state.step, bad)
        return new_state
