"""
Dense reference operators for small grids.

Matrices are assembled entry by entry from the stencil definitions (not from
the sparse Kronecker products the flow solver uses), so agreement between
the two is a real check. Intended for tests and small studies only.
"""

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np
from scipy import linalg

from config.constants import OracleConstants
from config.enums import BoundaryCondition, OperatorId
from models.grid import Grid, ScalarField, VectorField
from services.grid_operators import fill_ghosts
from utils.exceptions import OracleSizeError


@dataclass(frozen=True)
class DenseOperator:
    """Explicit matrix acting on packed cell values or packed velocity unknowns."""

    op_id: OperatorId
    matrix: np.ndarray
    boundary: Optional[BoundaryCondition] = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float)


def _check_size(grid: Grid) -> None:
    total = grid.cell_count + grid.velocity_unknown_count
    if total > OracleConstants.MAX_UNKNOWNS:
        raise OracleSizeError(
            f"dense oracle limited to {OracleConstants.MAX_UNKNOWNS} unknowns, grid has {total}"
        )


def _velocity_offsets(grid: Grid) -> list[int]:
    offsets = [0]
    for a in range(grid.dim):
        offsets.append(offsets[-1] + int(np.prod(grid.face_unknowns(a))))
    return offsets


def _neumann_laplacian(grid: Grid) -> np.ndarray:
    cells = grid.cells
    size = grid.cell_count
    matrix = np.zeros((size, size))
    for idx in product(*[range(n) for n in cells]):
        row = np.ravel_multi_index(idx, cells)
        for b in range(grid.dim):
            w = 1.0 / grid.dx[b] ** 2
            for step in (-1, 1):
                k = idx[b] + step
                if 0 <= k < cells[b]:
                    col = np.ravel_multi_index(idx[:b] + (k,) + idx[b + 1 :], cells)
                    matrix[row, col] += w
                    matrix[row, row] -= w
                # mirrored ghost: zero flux through the wall
    return matrix


def _dirichlet_vector_laplacian(grid: Grid) -> np.ndarray:
    offsets = _velocity_offsets(grid)
    size = offsets[-1]
    matrix = np.zeros((size, size))
    for a in range(grid.dim):
        shape = grid.face_unknowns(a)
        for idx in product(*[range(n) for n in shape]):
            row = offsets[a] + np.ravel_multi_index(idx, shape)
            for b in range(grid.dim):
                w = 1.0 / grid.dx[b] ** 2
                matrix[row, row] -= 2.0 * w
                for step in (-1, 1):
                    k = idx[b] + step
                    if 0 <= k < shape[b]:
                        col = offsets[a] + np.ravel_multi_index(idx[:b] + (k,) + idx[b + 1 :], shape)
                        matrix[row, col] += w
                    elif b != a:
                        # tangential ghost reflects with a sign flip
                        matrix[row, row] -= w
                    # along the normal the neighbour is a wall face with value 0
    return matrix


def _gradient(grid: Grid) -> np.ndarray:
    cells = grid.cells
    offsets = _velocity_offsets(grid)
    matrix = np.zeros((offsets[-1], grid.cell_count))
    for a in range(grid.dim):
        shape = grid.face_unknowns(a)
        for idx in product(*[range(n) for n in shape]):
            row = offsets[a] + np.ravel_multi_index(idx, shape)
            below = np.ravel_multi_index(idx, cells)
            above = np.ravel_multi_index(idx[:a] + (idx[a] + 1,) + idx[a + 1 :], cells)
            matrix[row, below] -= 1.0 / grid.dx[a]
            matrix[row, above] += 1.0 / grid.dx[a]
    return matrix


def _divergence(grid: Grid) -> np.ndarray:
    cells = grid.cells
    offsets = _velocity_offsets(grid)
    matrix = np.zeros((grid.cell_count, offsets[-1]))
    for idx in product(*[range(n) for n in cells]):
        row = np.ravel_multi_index(idx, cells)
        for a in range(grid.dim):
            shape = grid.face_unknowns(a)
            if idx[a] < cells[a] - 1:
                matrix[row, offsets[a] + np.ravel_multi_index(idx, shape)] += 1.0 / grid.dx[a]
            if idx[a] > 0:
                lower = idx[:a] + (idx[a] - 1,) + idx[a + 1 :]
                matrix[row, offsets[a] + np.ravel_multi_index(lower, shape)] -= 1.0 / grid.dx[a]
    return matrix


def _projection(grid: Grid) -> np.ndarray:
    gradient = _gradient(grid)
    divergence = _divergence(grid)
    potential = np.linalg.pinv(divergence @ gradient) @ divergence
    return np.eye(gradient.shape[0]) - gradient @ potential


def assemble(op_id: OperatorId, grid: Grid) -> DenseOperator:
    """
    Dense matrix of a grid operator.

    Raises:
        OracleSizeError: If the grid has more than OracleConstants.MAX_UNKNOWNS unknowns
    """
    _check_size(grid)
    if op_id is OperatorId.LAPLACIAN_NEUMANN:
        return DenseOperator(op_id, _neumann_laplacian(grid), BoundaryCondition.NEUMANN_ZERO)
    if op_id is OperatorId.LAPLACIAN_DIRICHLET:
        return DenseOperator(op_id, _dirichlet_vector_laplacian(grid), BoundaryCondition.DIRICHLET_ZERO)
    if op_id is OperatorId.GRADIENT:
        return DenseOperator(op_id, _gradient(grid), BoundaryCondition.NEUMANN_ZERO)
    if op_id is OperatorId.DIVERGENCE:
        return DenseOperator(op_id, _divergence(grid), BoundaryCondition.DIRICHLET_ZERO)
    return DenseOperator(op_id, _projection(grid), BoundaryCondition.DIRICHLET_ZERO)


def heat_reference(n0: ScalarField, t: float) -> ScalarField:
    """
    exp(t lap_N) n0 through the eigendecomposition of the Neumann Laplacian.

    Raises:
        OracleSizeError: If the grid is above the size cap
    """
    grid = n0.grid
    lap = assemble(OperatorId.LAPLACIAN_NEUMANN, grid).matrix
    eigenvalues, vectors = linalg.eigh(lap)
    values = vectors @ (np.exp(eigenvalues * t) * (vectors.T @ n0.pack()))
    return fill_ghosts(ScalarField.unpack(grid, values), BoundaryCondition.NEUMANN_ZERO)


def stokes_eigenpairs(grid: Grid) -> list[tuple[float, VectorField]]:
    """
    Eigenpairs of P(-lap_D) on the discretely divergence-free subspace, ascending.

    Raises:
        OracleSizeError: If the grid is above the size cap
    """
    divergence = assemble(OperatorId.DIVERGENCE, grid).matrix
    stokes = -assemble(OperatorId.LAPLACIAN_DIRICHLET, grid).matrix
    basis = linalg.null_space(divergence)
    reduced = basis.T @ stokes @ basis
    eigenvalues, coefficients = linalg.eigh(0.5 * (reduced + reduced.T))
    fields = basis @ coefficients
    return [
        (
            float(lam),
            fill_ghosts(VectorField.unpack(grid, fields[:, k]), BoundaryCondition.DIRICHLET_ZERO),
        )
        for k, lam in enumerate(eigenvalues)
    ]
