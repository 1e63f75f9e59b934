"""
Initial conditions built from a RunConfig.
"""

import numpy as np

from config.enums import DensityProfile, VelocityProfile
from config.run_config import ProfileSpec, RunConfig, VelocitySpec
from models.grid import Grid, ScalarField, VectorField
from models.params import ModelParams
from models.state import State
from services.transport_solver import fill_state_ghosts


def scalar_profile(grid: Grid, spec: ProfileSpec) -> ScalarField:
    """background + amplitude * exp(-|x - center|^2 / (2 width^2)) on cell centres."""
    values = np.full(grid.cells, spec.background, dtype=float)
    if spec.kind is DensityProfile.GAUSSIAN and spec.amplitude > 0.0:
        center = spec.center or tuple(0.5 * e for e in grid.extents)
        dist_sq = sum((x - c) ** 2 for x, c in zip(grid.cell_centers(), center))
        values = values + spec.amplitude * np.exp(-dist_sq / (2.0 * spec.width**2))
    return ScalarField.from_interior(grid, values)


def vortex(grid: Grid, amplitude: float) -> VectorField:
    """
    Single no-slip vortex in the (x0, x1) plane.

    Built from the stream function A sin^2(pi x0/L0) sin^2(pi x1/L1) sampled at
    cell corners, so the staggered divergence vanishes to round-off.
    In 3D the stream function is modulated by sin^2(pi x2/L2) per cell layer.
    """
    u = VectorField.zeros(grid)
    if amplitude == 0.0:
        return u
    nodes0 = np.sin(np.pi * grid.axis_faces(0) / grid.extents[0]) ** 2
    nodes1 = np.sin(np.pi * grid.axis_faces(1) / grid.extents[1]) ** 2
    stream = amplitude * np.multiply.outer(nodes0, nodes1)
    if grid.dim == 3:
        layers = np.sin(np.pi * grid.axis_centers(2) / grid.extents[2]) ** 2
        stream = np.multiply.outer(stream, layers)
    dx0, dx1 = grid.dx[0], grid.dx[1]
    u0 = np.diff(stream, axis=1) / dx1  # (N0+1, N1, ...)
    u1 = -np.diff(stream, axis=0) / dx0  # (N0, N1+1, ...)
    tail = (slice(1, -1),) * (grid.dim - 2)
    u.components[0][(slice(None), slice(1, -1)) + tail] = u0
    u.components[1][(slice(1, -1), slice(None)) + tail] = u1
    return u


def velocity_profile(grid: Grid, spec: VelocitySpec) -> VectorField:
    if spec.kind is VelocityProfile.VORTEX:
        return vortex(grid, spec.amplitude)
    return VectorField.zeros(grid)


def build_initial_state(config: RunConfig) -> tuple[State, ModelParams]:
    """
    Realize the configured initial data.

    The velocity starts at rest when the flow is disabled, and s0 of the
    returned parameters is the maximum of the realized oxygen field.
    """
    grid = config.build_grid()
    n = scalar_profile(grid, config.n0)
    c = scalar_profile(grid, config.c0)
    u = velocity_profile(grid, config.u0) if config.flow.enabled else VectorField.zeros(grid)
    state = fill_state_ghosts(State.at_rest(grid, n, c, u))
    params = config.build_params(s0=float(np.max(c.interior)))
    return state, params
