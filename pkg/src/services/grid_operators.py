"""
Discrete differential operators on the staggered grid.

Every operator assumes the ghost layers of its inputs are filled (fill_ghosts)
and returns values on interior cells or on velocity unknowns only. Face fluxes
are arrays of shape (N_a + 1 along axis a, N_b along every other axis), i.e.
every a-face of the interior cell rows, walls included.
"""

import numpy as np

from config.enums import BoundaryCondition
from models.grid import ALL, INNER, Grid, ScalarField, VectorField, axis_slice
from models.params import ModelParams
from services.regularization import saturated_density
from utils.exceptions import FastDiffusionUnsupportedError


def _lo(dim: int, axis: int, base=ALL) -> tuple:
    return axis_slice(dim, axis, slice(None, -1), base)


def _hi(dim: int, axis: int, base=ALL) -> tuple:
    return axis_slice(dim, axis, slice(1, None), base)


def _inner_except(dim: int, *axes: int) -> tuple:
    return tuple(ALL if b in axes else INNER for b in range(dim))


def fill_ghosts(field, bc: BoundaryCondition):
    """
    Refresh the ghost layer in place and return the field.

    neumann_zero mirrors interior values; dirichlet_zero reflects with a sign
    flip so the value midway between ghost and interior is zero. For vector
    fields the wall-normal faces are set to zero under dirichlet_zero and only
    the tangential ghosts are reflected.
    """
    sign = 1.0 if bc is BoundaryCondition.NEUMANN_ZERO else -1.0
    if isinstance(field, ScalarField):
        arrays = [(field.data, None)]
    else:
        arrays = list(zip(field.components, range(field.grid.dim)))
    dim = field.grid.dim
    for data, normal_axis in arrays:
        for b in range(dim):
            if b == normal_axis:
                if bc is BoundaryCondition.DIRICHLET_ZERO:
                    data[axis_slice(dim, b, 0)] = 0.0
                    data[axis_slice(dim, b, -1)] = 0.0
                continue
            data[axis_slice(dim, b, 0)] = sign * data[axis_slice(dim, b, 1)]
            data[axis_slice(dim, b, -1)] = sign * data[axis_slice(dim, b, -2)]
    return field


def normal_gradients(s: ScalarField) -> list[np.ndarray]:
    """(s_{k+1} - s_k)/dx_a on every a-face of the interior rows."""
    grid = s.grid
    return [
        np.diff(s.data, axis=a)[_inner_except(grid.dim, a)] / grid.dx[a]
        for a in range(grid.dim)
    ]


def face_gradient(s: ScalarField) -> VectorField:
    """Face-normal gradient of a scalar, ghost rows included."""
    grid = s.grid
    return VectorField(
        grid, [np.diff(s.data, axis=a) / grid.dx[a] for a in range(grid.dim)]
    )


def flux_divergence(grid: Grid, fluxes: list[np.ndarray]) -> np.ndarray:
    """Cell divergence of face fluxes, summed in fixed axis order."""
    out = np.zeros(grid.cells)
    for a, flux in enumerate(fluxes):
        out += np.diff(flux, axis=a) / grid.dx[a]
    return out


def cell_divergence(v: VectorField) -> ScalarField:
    """Divergence on interior cells (negative adjoint of face_gradient)."""
    grid = v.grid
    fluxes = [v.components[a][_inner_except(grid.dim, a)] for a in range(grid.dim)]
    return ScalarField.from_interior(grid, flux_divergence(grid, fluxes))


def laplacian(s: ScalarField) -> ScalarField:
    """5/7-point Laplacian; the boundary condition is the one held by the ghosts."""
    return ScalarField.from_interior(s.grid, flux_divergence(s.grid, normal_gradients(s)))


def tangential_gradient_sq(s: ScalarField, axis: int) -> np.ndarray:
    """
    Sum over b != axis of the squared tangential derivative on axis-faces.

    The tangential derivative is the centered difference in each adjacent cell,
    averaged over the two cells sharing the face.
    """
    grid = s.grid
    dim = grid.dim
    total = np.zeros(tuple(n + 1 if b == axis else n for b, n in enumerate(grid.cells)))
    for b in range(dim):
        if b == axis:
            continue
        centered = (
            s.data[axis_slice(dim, b, slice(2, None))]
            - s.data[axis_slice(dim, b, slice(None, -2))]
        ) / (2.0 * grid.dx[b])
        centered = centered[_inner_except(dim, axis, b)]
        on_face = 0.5 * (centered[_lo(dim, axis)] + centered[_hi(dim, axis)])
        total += on_face * on_face
    return total


def face_diffusivity(n: ScalarField, p: float, eps: float) -> list[np.ndarray]:
    """(|grad n|^2_face + eps)^((p-2)/2) on every face, per axis."""
    exponent = 0.5 * (p - 2.0)
    out = []
    for a, g in enumerate(normal_gradients(n)):
        mag_sq = g * g + tangential_gradient_sq(n, a)
        out.append((mag_sq + eps) ** exponent)
    return out


def plaplacian_div(n: ScalarField, p: float, eps: float) -> ScalarField:
    """
    Regularized p-Laplacian div((|grad n|^2 + eps)^((p-2)/2) grad n).

    For p = 2 the diffusivity is exactly 1.0 and the result coincides with
    laplacian() bit for bit.

    Raises:
        FastDiffusionUnsupportedError: If p < 2
    """
    if p < 2.0:
        raise FastDiffusionUnsupportedError(
            f"fast-diffusion unsupported: the p-Laplacian operator needs p >= 2, got {p}"
        )
    grads = normal_gradients(n)
    if p == 2.0:
        fluxes = grads
    else:
        fluxes = [d * g for d, g in zip(face_diffusivity(n, p, eps), grads)]
    return ScalarField.from_interior(n.grid, flux_divergence(n.grid, fluxes))


def chemotaxis_div(n: ScalarField, c: ScalarField, params: ModelParams) -> ScalarField:
    """
    div(n F_eps'(n) chi(c) grad c) with the mobility n F_eps'(n) upwinded by the
    sign of grad c and chi evaluated at the arithmetic face mean of c.
    """
    grid = n.grid
    dim = grid.dim
    mobility = saturated_density(n.data, params.epsilon)
    fluxes = []
    for a, gc in enumerate(normal_gradients(c)):
        rows = _inner_except(dim, a)
        m_cells = mobility[rows]
        c_cells = c.data[rows]
        upwind = np.where(gc > 0.0, m_cells[_lo(dim, a)], m_cells[_hi(dim, a)])
        c_face = 0.5 * (c_cells[_lo(dim, a)] + c_cells[_hi(dim, a)])
        fluxes.append(upwind * params.sensitivity.chi(c_face) * gc)
    return ScalarField.from_interior(grid, flux_divergence(grid, fluxes))


def advect_scalar(s: ScalarField, u: VectorField) -> ScalarField:
    """Tendency -div(u s) with first-order upwind face values."""
    grid = s.grid
    dim = grid.dim
    fluxes = []
    for a in range(dim):
        rows = _inner_except(dim, a)
        vel = u.components[a][rows]
        cells = s.data[rows]
        upwind = np.where(vel > 0.0, cells[_lo(dim, a)], cells[_hi(dim, a)])
        fluxes.append(vel * upwind)
    return ScalarField.from_interior(grid, -flux_divergence(grid, fluxes))


def velocity_on_faces(w: VectorField, axis: int, b: int) -> np.ndarray:
    """
    Component b of w on the unknown axis-faces.

    b == axis is the stored value; otherwise the 4-point average of the
    b-faces surrounding the axis-face.
    """
    grid = w.grid
    dim = grid.dim
    if b == axis:
        return w.unknowns(axis)
    comp = w.components[b]
    # along axis: scalar cells k and k+1 for faces k = 1..N-1
    idx_lo = [INNER] * dim
    idx_hi = [INNER] * dim
    idx_lo[axis] = slice(1, -2)
    idx_hi[axis] = slice(2, -1)
    total = np.zeros(grid.face_unknowns(axis))
    for along_a in (idx_lo, idx_hi):
        for along_b in (slice(None, -1), slice(1, None)):
            idx = list(along_a)
            idx[b] = along_b
            total += comp[tuple(idx)]
    return 0.25 * total


def advect_velocity(u: VectorField, w: VectorField) -> VectorField:
    """Tendency -(w . grad) u, convective form, first-order upwind."""
    grid = u.grid
    dim = grid.dim
    out = VectorField.zeros(grid)
    for a in range(dim):
        comp = u.components[a]
        center = comp[grid.interior]
        tendency = np.zeros(grid.face_unknowns(a))
        for b in range(dim):
            wb = velocity_on_faces(w, a, b)
            minus = comp[axis_slice(dim, b, slice(None, -2), INNER)]
            plus = comp[axis_slice(dim, b, slice(2, None), INNER)]
            backward = (center - minus) / grid.dx[b]
            forward = (plus - center) / grid.dx[b]
            tendency -= wb * np.where(wb > 0.0, backward, forward)
        out.components[a][grid.interior] = tendency
    return out


def vector_laplacian(u: VectorField) -> VectorField:
    """
    Componentwise Laplacian on the velocity unknowns, no-slip ghosts assumed.
    """
    grid = u.grid
    dim = grid.dim
    out = VectorField.zeros(grid)
    for a in range(dim):
        comp = u.components[a]
        center = comp[grid.interior]
        total = np.zeros(grid.face_unknowns(a))
        for b in range(dim):
            minus = comp[axis_slice(dim, b, slice(None, -2), INNER)]
            plus = comp[axis_slice(dim, b, slice(2, None), INNER)]
            total += (plus - 2.0 * center + minus) / grid.dx[b] ** 2
        out.components[a][grid.interior] = total
    return out


def face_average(s: ScalarField, axis: int) -> np.ndarray:
    """Arithmetic mean of a scalar on the unknown axis-faces."""
    dim = s.grid.dim
    cells = s.data[_inner_except(dim, axis)]
    lo = cells[axis_slice(dim, axis, slice(1, -2))]
    hi = cells[axis_slice(dim, axis, slice(2, -1))]
    return 0.5 * (lo + hi)


def cell_gradient(s: ScalarField) -> list[np.ndarray]:
    """Cell-centred gradient: average of the two adjacent face gradients."""
    dim = s.grid.dim
    out = []
    for a, g in enumerate(normal_gradients(s)):
        out.append(0.5 * (g[_lo(dim, a)] + g[_hi(dim, a)]))
    return out
