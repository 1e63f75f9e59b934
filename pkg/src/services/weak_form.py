"""
Weak-formulation residuals of the simulated system.

Each equation is tested against a smooth space-time bump with compact support
inside the box and before the final time. The time derivative is moved onto
the test function, the diffusion of c and u is moved onto it as well, and the
remaining terms use the regularized fluxes the solver actually integrates.
Time integrals use the trapezoid rule over the snapshot times, space
integrals the midpoint rule on cell centres.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from config.enums import BoundaryCondition
from models.grid import Grid
from models.params import ModelParams
from models.state import State
from services.flow_solver import FlowSolver
from services.grid_operators import cell_gradient, fill_ghosts
from services.regularization import consumption_weight, saturated_density
from utils.exceptions import PreconditionError


def _bump_derivative(x: np.ndarray, lower: float, upper: float, order: int) -> np.ndarray:
    """
    Derivative of sin^4(pi (x - lower)/(upper - lower)) on [lower, upper], zero outside.

    Written as 3/8 - cos(2t)/2 + cos(4t)/8; C^3 across the support edges.
    """
    k = np.pi / (upper - lower)
    theta = k * (x - lower)
    if order == 0:
        values = 0.375 - 0.5 * np.cos(2.0 * theta) + 0.125 * np.cos(4.0 * theta)
    elif order == 1:
        values = k * (np.sin(2.0 * theta) - 0.5 * np.sin(4.0 * theta))
    elif order == 2:
        values = k**2 * (2.0 * np.cos(2.0 * theta) - 2.0 * np.cos(4.0 * theta))
    elif order == 3:
        values = k**3 * (-4.0 * np.sin(2.0 * theta) + 8.0 * np.sin(4.0 * theta))
    else:
        raise ValueError(f"bump derivatives are available up to order 3, got {order}")
    inside = (x >= lower) & (x <= upper)
    return np.where(inside, values, 0.0)


@dataclass(frozen=True)
class SpaceTimeBump:
    """
    psi(x, t) = eta(t - t0) * prod_a b_a(x_a), with eta(s) = (1 - s/t_cut)^3 before t_cut.

    The momentum equation is tested with the divergence-free field
    (d psi/dx1, -d psi/dx0, 0).
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    t_cut: float

    @property
    def dim(self) -> int:
        return len(self.lower)

    def eta(self, s: float) -> float:
        if s >= self.t_cut:
            return 0.0
        return (1.0 - s / self.t_cut) ** 3

    def eta_prime(self, s: float) -> float:
        if s >= self.t_cut:
            return 0.0
        return -3.0 / self.t_cut * (1.0 - s / self.t_cut) ** 2

    def spatial(self, grid: Grid, orders: tuple[int, ...]) -> np.ndarray:
        """Mixed partial derivative of the spatial bump on interior cell centres."""
        values = np.ones(grid.cells)
        for a, order in enumerate(orders):
            shape = [1] * grid.dim
            shape[a] = -1
            factor = _bump_derivative(grid.axis_centers(a), self.lower[a], self.upper[a], order)
            values = values * factor.reshape(shape)
        return values

    def check_support(self, grid: Grid, t_span: float) -> None:
        """
        Raises:
            PreconditionError: If the bump touches the boundary or reaches past the last snapshot
        """
        if len(self.lower) != grid.dim or len(self.upper) != grid.dim:
            raise PreconditionError(f"test function has dimension {self.dim}, grid has {grid.dim}")
        for a, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not 0.0 < lo < hi < grid.extents[a]:
                raise PreconditionError(
                    f"test support [{lo}, {hi}] along axis {a} must lie strictly inside (0, {grid.extents[a]})"
                )
        if not 0.0 < self.t_cut < t_span:
            raise PreconditionError(
                f"test function must vanish before the last snapshot: t_cut={self.t_cut}, span={t_span}"
            )


def _orders(dim: int, *axes: int) -> tuple[int, ...]:
    orders = [0] * dim
    for a in axes:
        orders[a] += 1
    return tuple(orders)


@dataclass(frozen=True)
class WeakResidual:
    """Signed residual of the n, c and u identities."""

    n: float
    c: float
    u: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.n, self.c, self.u)

    def max_abs(self) -> float:
        return max(abs(v) for v in self.as_tuple())


class WeakFormAccumulator:
    """
    Streams snapshots into the three weak identities.

    Only the previous integrand values are held, so a run can feed every step
    without keeping its history. Snapshot times must increase strictly; the
    trapezoid rule handles non-uniform spacing.
    """

    def __init__(
        self,
        grid: Grid,
        bump: SpaceTimeBump,
        params: ModelParams,
        flow: Optional[FlowSolver] = None,
    ):
        if grid.dim != bump.dim:
            raise PreconditionError(f"test function has dimension {bump.dim}, grid has {grid.dim}")
        self.grid = grid
        self.bump = bump
        self.params = params
        self.flow = flow
        dim = grid.dim

        self._psi = bump.spatial(grid, _orders(dim))
        self._grad_psi = [bump.spatial(grid, _orders(dim, a)) for a in range(dim)]
        self._lap_psi = sum(bump.spatial(grid, _orders(dim, a, a)) for a in range(dim))

        # momentum test field phi = (d1 psi, -d0 psi, 0, ...)
        sign_axis = ((1.0, 1), (-1.0, 0))
        self._phi = [sign * bump.spatial(grid, _orders(dim, axis)) for sign, axis in sign_axis]
        self._grad_phi = [
            [sign * bump.spatial(grid, _orders(dim, axis, j)) for j in range(dim)]
            for sign, axis in sign_axis
        ]
        self._lap_phi = [
            sign * sum(bump.spatial(grid, _orders(dim, axis, j, j)) for j in range(dim))
            for sign, axis in sign_axis
        ]

        self._t0: Optional[float] = None
        self._last_t: Optional[float] = None
        self._last_values: Optional[np.ndarray] = None
        self._totals = np.zeros(3)

    def _integrands(self, state: State, s: float) -> np.ndarray:
        """Spatial integrals of the three identities at shifted time s (without the initial terms)."""
        params = self.params
        grid = self.grid
        dim = grid.dim
        vol = grid.cell_volume
        eta = self.bump.eta(s)
        eta_t = self.bump.eta_prime(s)

        n = state.n.interior
        c = state.c.interior
        u = state.u.to_cells()
        grad_n = cell_gradient(state.n)
        grad_c = cell_gradient(state.c)

        grad_n_sq = sum(g * g for g in grad_n)
        diffusivity = (grad_n_sq + params.epsilon) ** (0.5 * (params.p - 2.0))
        drift = saturated_density(n, params.epsilon) * params.sensitivity.chi(c)

        flux_dot_grad = sum(
            (diffusivity * grad_n[a] - drift * grad_c[a] - n * u[a]) * self._grad_psi[a]
            for a in range(dim)
        )
        res_n = -eta_t * np.sum(n * self._psi) + eta * np.sum(flux_dot_grad)

        consumption = consumption_weight(n, params.epsilon) * params.sensitivity.f(c)
        transport_c = sum(c * u[a] * self._grad_psi[a] for a in range(dim))
        res_c = -eta_t * np.sum(c * self._psi) + eta * np.sum(
            consumption * self._psi - transport_c - c * self._lap_psi
        )

        res_u = -eta_t * sum(np.sum(u[i] * self._phi[i]) for i in range(2))
        res_u -= eta * sum(np.sum(u[i] * self._lap_phi[i]) for i in range(2))
        forcing = sum(g * self._phi[i] for i, g in enumerate(params.phi_gradient[:2]))
        res_u -= eta * np.sum(n * forcing)
        if params.kappa != 0.0:
            w = u
            if self.flow is not None:
                w = self.flow.yosida(state.u, params.epsilon).to_cells()
            convection = sum(
                u[i] * w[j] * self._grad_phi[i][j] for i in range(2) for j in range(dim)
            )
            res_u -= params.kappa * eta * np.sum(convection)

        return np.array([res_n, res_c, res_u]) * vol

    def add(self, state: State) -> None:
        """
        Add one snapshot (ghosts are refilled here).

        Raises:
            PreconditionError: If the snapshot is not later than the previous one
        """
        if state.grid != self.grid:
            raise PreconditionError("snapshot grid differs from the accumulator grid")
        fill_ghosts(state.n, BoundaryCondition.NEUMANN_ZERO)
        fill_ghosts(state.c, BoundaryCondition.NEUMANN_ZERO)
        fill_ghosts(state.u, BoundaryCondition.DIRICHLET_ZERO)

        if self._t0 is None:
            self._t0 = state.t
            vol = self.grid.cell_volume
            eta0 = self.bump.eta(0.0)
            u = state.u.to_cells()
            self._totals -= eta0 * vol * np.array(
                [
                    np.sum(state.n.interior * self._psi),
                    np.sum(state.c.interior * self._psi),
                    sum(np.sum(u[i] * self._phi[i]) for i in range(2)),
                ]
            )
        elif not state.t > self._last_t:
            raise PreconditionError(
                f"snapshot times must increase: {state.t} after {self._last_t}"
            )

        s = state.t - self._t0
        values = self._integrands(state, s) if s < self.bump.t_cut else np.zeros(3)
        if self._last_values is not None:
            self._totals += 0.5 * (state.t - self._last_t) * (values + self._last_values)
        self._last_t = state.t
        self._last_values = values

    @property
    def span(self) -> float:
        if self._t0 is None:
            return 0.0
        return self._last_t - self._t0

    def residual(self) -> WeakResidual:
        """
        Raises:
            PreconditionError: If fewer than 2 snapshots were added or the support condition fails
        """
        if self._last_values is None or self.span == 0.0:
            raise PreconditionError("weak residual needs at least 2 snapshots")
        self.bump.check_support(self.grid, self.span)
        return WeakResidual(*(float(v) for v in self._totals))


def weak_residual(
    snapshots: Iterable[State],
    bump: SpaceTimeBump,
    params: ModelParams,
    flow: Optional[FlowSolver] = None,
) -> WeakResidual:
    """
    Residuals of the three weak identities over a sequence of snapshots.

    Raises:
        PreconditionError: If the snapshots are fewer than 2, not time-ordered,
            or the test function violates its support condition
    """
    snapshots = list(snapshots)
    if len(snapshots) < 2:
        raise PreconditionError("weak residual needs at least 2 snapshots")
    grid = snapshots[0].grid
    bump.check_support(grid, snapshots[-1].t - snapshots[0].t)
    accumulator = WeakFormAccumulator(grid, bump, params, flow)
    for state in snapshots:
        accumulator.add(state)
    return accumulator.residual()
