"""
Incompressible flow: Helmholtz projection, Yosida resolvent of the discrete
Stokes operator and the explicit Navier-Stokes step (Chorin projection).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as spla

from config.constants import SolverConstants
from config.enums import BoundaryCondition, SolveMethod
from logger import logger
from models.grid import Grid, ScalarField, VectorField
from models.params import ModelParams
from services.grid_operators import (
    advect_velocity,
    cell_divergence,
    face_average,
    face_gradient,
    fill_ghosts,
    laplacian,
    vector_laplacian,
)
from utils.exceptions import SolverConvergenceError


def _eye(n: int) -> sparse.spmatrix:
    return sparse.identity(n, format="csr")


def _kron_axis(matrix, axis: int, sizes: list[int]) -> sparse.spmatrix:
    """Embed a 1D operator acting along `axis` into C-ordered flattening."""
    out = None
    for b, size in enumerate(sizes):
        factor = matrix if b == axis else _eye(size)
        out = factor if out is None else sparse.kron(out, factor, format="csr")
    return out


def _gradient_1d(n: int, dx: float) -> sparse.spmatrix:
    """(n-1) x n map from cells to interior faces."""
    ones = np.ones(n - 1)
    return sparse.diags([-ones, ones], [0, 1], shape=(n - 1, n), format="csr") / dx


def _second_difference_1d(n: int, dx: float, corner: float) -> sparse.spmatrix:
    """tridiag(1, -2, 1)/dx^2 with the first and last diagonal entries set to corner."""
    main = np.full(n, -2.0)
    main[0] = main[-1] = corner
    off = np.ones(n - 1)
    return sparse.diags([off, main, off], [-1, 0, 1], format="csr") / dx**2


@dataclass
class SparseOperators:
    """Sparse twins of the stencils acting on packed unknowns."""

    gradient: sparse.spmatrix  # cells -> velocity unknowns
    divergence: sparse.spmatrix  # velocity unknowns -> cells
    vector_laplacian: sparse.spmatrix  # no-slip Laplacian on velocity unknowns

    @property
    def neumann_laplacian(self) -> sparse.spmatrix:
        return (self.divergence @ self.gradient).tocsr()


def assemble_sparse_operators(grid: Grid) -> SparseOperators:
    """Assemble gradient, divergence and the no-slip vector Laplacian."""
    dim = grid.dim
    cells = list(grid.cells)
    grad_blocks = []
    lap_blocks = []
    for a in range(dim):
        grad_blocks.append(_kron_axis(_gradient_1d(cells[a], grid.dx[a]), a, cells))
        sizes = list(grid.face_unknowns(a))
        lap = None
        for b in range(dim):
            if b == a:
                one_d = _second_difference_1d(sizes[b], grid.dx[b], corner=-2.0)
            else:
                one_d = _second_difference_1d(sizes[b], grid.dx[b], corner=-3.0)
            term = _kron_axis(one_d, b, sizes)
            lap = term if lap is None else lap + term
        lap_blocks.append(lap)
    gradient = sparse.vstack(grad_blocks, format="csr")
    return SparseOperators(
        gradient=gradient,
        divergence=(-gradient.T).tocsr(),
        vector_laplacian=sparse.block_diag(lap_blocks, format="csr"),
    )


@dataclass
class PoissonSolver:
    """
    Neumann Poisson solver lap(q) = rhs with zero-mean q.

    The right-hand side is shifted to zero mean (the compatibility condition).
    The direct method factorizes the Laplacian bordered by the mean constraint;
    the cg method runs matrix-free conjugate gradients on -lap.
    """

    grid: Grid
    method: SolveMethod = SolveMethod.DIRECT
    tolerance: float = SolverConstants.POISSON_TOL
    max_iterations: int = SolverConstants.POISSON_MAX_ITER
    _lu: Optional[spla.SuperLU] = field(default=None, init=False, repr=False)

    def _factorize(self) -> spla.SuperLU:
        if self._lu is None:
            lap = assemble_sparse_operators(self.grid).neumann_laplacian
            ones = sparse.csr_matrix(np.ones((1, self.grid.cell_count)))
            bordered = sparse.bmat([[lap, ones.T], [ones, None]], format="csc")
            self._lu = spla.splu(bordered)
            logger.debug(f"Factorized Poisson matrix for {self.grid.cells}")
        return self._lu

    def apply(self, q: np.ndarray) -> np.ndarray:
        """Matrix-free Neumann Laplacian of interior values."""
        field_q = fill_ghosts(ScalarField.from_interior(self.grid, q), BoundaryCondition.NEUMANN_ZERO)
        return laplacian(field_q).interior

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """
        Solve on interior cells.

        Raises:
            SolverConvergenceError: If the residual exceeds tolerance * ||rhs||
        """
        rhs = rhs - rhs.mean()
        rhs_norm = float(np.linalg.norm(rhs))
        if rhs_norm == 0.0:
            return np.zeros(self.grid.cells)

        if self.method is SolveMethod.DIRECT:
            lu = self._factorize()
            solution = lu.solve(np.append(rhs.ravel(), 0.0))[:-1]
            q = solution.reshape(self.grid.cells)
        else:
            size = self.grid.cell_count
            operator = spla.LinearOperator(
                (size, size),
                matvec=lambda x: -self.apply(x.reshape(self.grid.cells)).ravel(),
                dtype=float,
            )
            flat, info = spla.cg(
                operator,
                -rhs.ravel(),
                rtol=0.1 * self.tolerance,
                atol=0.0,
                maxiter=self.max_iterations,
            )
            logger.debug(f"Poisson CG finished with info={info}")
            q = flat.reshape(self.grid.cells)
        q = q - q.mean()

        residual = float(np.linalg.norm(self.apply(q) - rhs))
        if residual > self.tolerance * rhs_norm:
            raise SolverConvergenceError("poisson", residual, self.tolerance * rhs_norm)
        return q


class FlowSolver:
    """
    Velocity update for one simulation: projection, Yosida resolvent and the
    Navier-Stokes step. Factorizations are built once per grid (and per
    epsilon for the resolvent).
    """

    def __init__(
        self,
        grid: Grid,
        poisson_method: SolveMethod = SolveMethod.DIRECT,
        yosida_method: SolveMethod = SolveMethod.DIRECT,
        poisson_tol: float = SolverConstants.POISSON_TOL,
        yosida_tol: float = SolverConstants.YOSIDA_TOL,
        yosida_max_iter: int = SolverConstants.YOSIDA_MAX_ITER,
    ):
        self.grid = grid
        self.poisson = PoissonSolver(grid, poisson_method, poisson_tol)
        self.yosida_method = yosida_method
        self.yosida_tol = yosida_tol
        self.yosida_max_iter = yosida_max_iter
        self._operators: Optional[SparseOperators] = None
        self._yosida_lu: dict[float, spla.SuperLU] = {}

    @property
    def operators(self) -> SparseOperators:
        if self._operators is None:
            self._operators = assemble_sparse_operators(self.grid)
        return self._operators

    def project(self, u: VectorField) -> tuple[VectorField, ScalarField]:
        """
        Helmholtz projection u - grad q with lap q = div u.

        Args:
            u: Velocity with no-slip ghosts filled

        Returns:
            Tuple of (divergence-free velocity, zero-mean potential q)
        """
        div_u = cell_divergence(u).interior
        q = fill_ghosts(
            ScalarField.from_interior(self.grid, self.poisson.solve(div_u)),
            BoundaryCondition.NEUMANN_ZERO,
        )
        grad_q = face_gradient(q)
        projected = u.copy()
        for a in range(self.grid.dim):
            projected.unknowns(a)[...] -= grad_q.unknowns(a)
        return fill_ghosts(projected, BoundaryCondition.DIRICHLET_ZERO), q

    def stokes_apply(self, v: VectorField) -> VectorField:
        """Discrete Stokes operator A_h v = P(-lap_D v)."""
        fill_ghosts(v, BoundaryCondition.DIRICHLET_ZERO)
        lap = vector_laplacian(v)
        for comp in lap.components:
            comp *= -1.0
        fill_ghosts(lap, BoundaryCondition.DIRICHLET_ZERO)
        projected, _ = self.project(lap)
        return projected

    def _yosida_factor(self, eps: float) -> spla.SuperLU:
        if eps not in self._yosida_lu:
            ops = self.operators
            n_vel = ops.gradient.shape[0]
            n_cells = ops.gradient.shape[1]
            ones = sparse.csr_matrix(np.ones((n_cells, 1)))
            saddle = sparse.bmat(
                [
                    [_eye(n_vel) - eps * ops.vector_laplacian, ops.gradient, None],
                    [ops.divergence, None, ones],
                    [None, ones.T, None],
                ],
                format="csc",
            )
            self._yosida_lu[eps] = spla.splu(saddle)
            logger.debug(f"Factorized Yosida saddle system for eps={eps:g}")
        return self._yosida_lu[eps]

    def yosida(self, u: VectorField, eps: float) -> VectorField:
        """
        Resolvent Y_eps u = (I + eps A_h)^(-1) P u.

        u is projected first. A velocity projected near hydrostatic balance keeps
        a gradient part set by the round-off of the much larger provisional
        field, and no divergence-free v can match it. After the projection the
        leftover gradient part is round-off of ||u||, so the residual target
        stays yosida_tol * ||u||.

        Raises:
            SolverConvergenceError: If the residual misses yosida_tol * ||u|| or
                the result is not a contraction of u
        """
        grid = self.grid
        u_norm = float(np.linalg.norm(u.pack()))
        if u_norm == 0.0:
            return VectorField.zeros(grid)
        solenoidal, _ = self.project(fill_ghosts(u.copy(), BoundaryCondition.DIRICHLET_ZERO))
        rhs = solenoidal.pack()
        if not np.any(rhs):
            return VectorField.zeros(grid)

        if self.yosida_method is SolveMethod.DIRECT:
            lu = self._yosida_factor(eps)
            n_vel = rhs.size
            extended = np.concatenate([rhs, np.zeros(grid.cell_count + 1)])
            flat = lu.solve(extended)[:n_vel]
        else:

            def matvec(x: np.ndarray) -> np.ndarray:
                v = VectorField.unpack(grid, x)
                return x + eps * self.stokes_apply(v).pack()

            operator = spla.LinearOperator((rhs.size, rhs.size), matvec=matvec, dtype=float)
            flat, info = spla.cg(
                operator,
                rhs,
                x0=rhs.copy(),
                rtol=0.1 * self.yosida_tol,
                atol=0.1 * self.yosida_tol * u_norm,
                maxiter=self.yosida_max_iter,
            )
            logger.debug(f"Yosida CG finished with info={info}")

        v = fill_ghosts(VectorField.unpack(grid, flat), BoundaryCondition.DIRICHLET_ZERO)
        residual = float(
            np.linalg.norm(flat + eps * self.stokes_apply(v.copy()).pack() - rhs)
        )
        target = self.yosida_tol * u_norm
        if residual > target:
            raise SolverConvergenceError("yosida", residual, target)
        v_norm = float(np.linalg.norm(flat))
        if v_norm > u_norm * (1.0 + 10.0 * self.yosida_tol):
            raise SolverConvergenceError("yosida contraction", v_norm, u_norm)
        return v

    def ns_step(
        self, u: VectorField, n: ScalarField, params: ModelParams, dt: float
    ) -> tuple[VectorField, ScalarField]:
        """
        One explicit Chorin step of u_t + kappa (Y_eps u . grad) u = lap u + grad P + n grad(Phi).

        Args:
            u: Divergence-free velocity with no-slip ghosts
            n: Density with ghosts filled
            params: Model parameters (kappa, epsilon, phi_gradient)
            dt: Time step

        Returns:
            Tuple of (new divergence-free velocity, zero-mean pressure)
        """
        grid = self.grid
        tendency = vector_laplacian(u)
        if params.kappa != 0.0:
            convecting = self.yosida(u, params.epsilon)
            advection = advect_velocity(u, convecting)
            for a in range(grid.dim):
                tendency.unknowns(a)[...] += params.kappa * advection.unknowns(a)
        for a, g in enumerate(params.phi_gradient):
            if g != 0.0:
                tendency.unknowns(a)[...] += face_average(n, a) * g

        provisional = u.copy()
        for a in range(grid.dim):
            provisional.unknowns(a)[...] += dt * tendency.unknowns(a)
        fill_ghosts(provisional, BoundaryCondition.DIRICHLET_ZERO)

        u_new, q = self.project(provisional)
        # u_new = u* + dt grad P, hence P = -q/dt
        pressure = ScalarField(grid, -q.data / dt)
        return u_new, pressure


def buoyancy_total(n: ScalarField, phi_gradient) -> np.ndarray:
    """
    Integral of the face-interpolated forcing n grad(Phi), wall faces at half weight.

    Equals grad(Phi) times the mass of n for Neumann ghosts.
    """
    grid = n.grid
    dim = grid.dim
    totals = np.zeros(dim)
    for a, g in enumerate(phi_gradient):
        inner = face_average(n, a).sum()
        wall = 0.5 * (n.interior.take(0, axis=a).sum() + n.interior.take(-1, axis=a).sum())
        totals[a] = g * (inner + wall) * grid.cell_volume
    return totals
