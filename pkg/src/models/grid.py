"""
Uniform Cartesian box, cell-centred scalar fields and face-staggered vector fields.

Index conventions (per axis, N cells, one ghost layer):
- scalars: index 0 is a ghost, 1..N are interior cells, N+1 is a ghost
- vector component a: along axis a the index k = 0..N is the face between
  scalar indices k and k+1 (k = 0 and k = N lie on the walls); along every other
  axis it follows the scalar convention, ghosts included
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from config.constants import SolverConstants
from utils.exceptions import ConfigError


def axis_slice(dim: int, axis: int, sl: slice, base: slice = slice(None)) -> tuple:
    """Index tuple applying `sl` on one axis and `base` on all others."""
    return tuple(sl if b == axis else base for b in range(dim))


INNER = slice(1, -1)
ALL = slice(None)


@dataclass(frozen=True)
class Grid:
    """Uniform box [0, L_0] x ... with cells[a] cells along axis a."""

    extents: tuple[float, ...]
    cells: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "extents", tuple(float(e) for e in self.extents))
        object.__setattr__(self, "cells", tuple(int(n) for n in self.cells))
        if len(self.extents) != len(self.cells):
            raise ConfigError("extents and cells must have the same length")
        if self.dim not in (2, 3):
            raise ConfigError(f"dim must be 2 or 3, got {self.dim}")
        if any(n < SolverConstants.MIN_CELLS for n in self.cells):
            raise ConfigError(
                f"every axis needs at least {SolverConstants.MIN_CELLS} cells, got {self.cells}"
            )
        if any(not np.isfinite(e) or e <= 0.0 for e in self.extents):
            raise ConfigError(f"extents must be positive, got {self.extents}")

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def dx(self) -> tuple[float, ...]:
        return tuple(e / n for e, n in zip(self.extents, self.cells))

    @property
    def min_dx(self) -> float:
        return min(self.dx)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.dx))

    @property
    def domain_volume(self) -> float:
        return float(np.prod(self.extents))

    @property
    def cell_count(self) -> int:
        return int(np.prod(self.cells))

    @property
    def scalar_shape(self) -> tuple[int, ...]:
        return tuple(n + 2 for n in self.cells)

    def face_shape(self, axis: int) -> tuple[int, ...]:
        """Storage shape of vector component `axis`."""
        return tuple(n + 1 if b == axis else n + 2 for b, n in enumerate(self.cells))

    @property
    def interior(self) -> tuple:
        return (INNER,) * self.dim

    def face_interior(self, axis: int) -> tuple:
        """Interior faces of component `axis`: the velocity unknowns."""
        return (INNER,) * self.dim

    def face_unknowns(self, axis: int) -> tuple[int, ...]:
        """Shape of the unknown faces of component `axis`."""
        return tuple(n - 1 if b == axis else n for b, n in enumerate(self.cells))

    @property
    def velocity_unknown_count(self) -> int:
        return int(sum(np.prod(self.face_unknowns(a)) for a in range(self.dim)))

    def axis_centers(self, axis: int) -> np.ndarray:
        """Cell-centre coordinates along one axis."""
        return (np.arange(self.cells[axis]) + 0.5) * self.dx[axis]

    def axis_faces(self, axis: int) -> np.ndarray:
        """Face coordinates along one axis, walls included."""
        return np.arange(self.cells[axis] + 1) * self.dx[axis]

    def cell_centers(self) -> list[np.ndarray]:
        """Meshgrid (ij indexing) of interior cell centres."""
        return np.meshgrid(
            *[self.axis_centers(a) for a in range(self.dim)], indexing="ij"
        )

    def face_centers(self, axis: int) -> list[np.ndarray]:
        """Meshgrid of all faces of component `axis` (walls included, no ghosts)."""
        coords = [
            self.axis_faces(b) if b == axis else self.axis_centers(b)
            for b in range(self.dim)
        ]
        return np.meshgrid(*coords, indexing="ij")

    def refined(self, factor: int = 2) -> "Grid":
        """Same box with `factor` times as many cells per axis."""
        return Grid(self.extents, tuple(n * factor for n in self.cells))


@dataclass
class ScalarField:
    """Cell-centred values with one ghost layer."""

    grid: Grid
    data: np.ndarray

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.scalar_shape))

    @classmethod
    def from_interior(cls, grid: Grid, values) -> "ScalarField":
        """Wrap interior values; ghosts start at zero and must be filled."""
        field = cls.zeros(grid)
        field.data[grid.interior] = values
        return field

    @property
    def interior(self) -> np.ndarray:
        return self.data[self.grid.interior]

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.data.copy())

    def integral(self) -> float:
        """Midpoint-rule integral over the box."""
        return float(self.interior.sum() * self.grid.cell_volume)

    def pack(self) -> np.ndarray:
        return self.interior.ravel().copy()

    @classmethod
    def unpack(cls, grid: Grid, flat: np.ndarray) -> "ScalarField":
        return cls.from_interior(grid, np.asarray(flat).reshape(grid.cells))


@dataclass
class VectorField:
    """Face-staggered vector components (MAC layout)."""

    grid: Grid
    components: list[np.ndarray]

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        return cls(grid, [np.zeros(grid.face_shape(a)) for a in range(grid.dim)])

    def copy(self) -> "VectorField":
        return VectorField(self.grid, [c.copy() for c in self.components])

    def unknowns(self, axis: int) -> np.ndarray:
        """View of the interior faces of one component."""
        return self.components[axis][self.grid.face_interior(axis)]

    def pack(self) -> np.ndarray:
        """Concatenate the unknown faces of every component (C order)."""
        return np.concatenate(
            [self.unknowns(a).ravel() for a in range(self.grid.dim)]
        )

    @classmethod
    def unpack(cls, grid: Grid, flat: np.ndarray) -> "VectorField":
        """Inverse of pack; walls and ghosts start at zero and must be filled."""
        field = cls.zeros(grid)
        offset = 0
        for a in range(grid.dim):
            shape = grid.face_unknowns(a)
            size = int(np.prod(shape))
            field.components[a][grid.face_interior(a)] = np.asarray(
                flat[offset : offset + size]
            ).reshape(shape)
            offset += size
        return field

    def to_cells(self) -> list[np.ndarray]:
        """Average each component onto interior cell centres."""
        dim = self.grid.dim
        out = []
        for a, comp in enumerate(self.components):
            lo = comp[axis_slice(dim, a, slice(0, -1), INNER)]
            hi = comp[axis_slice(dim, a, slice(1, None), INNER)]
            out.append(0.5 * (lo + hi))
        return out

    def norm_squared(self) -> float:
        """Sum over unknown faces of |u|^2 times the cell volume."""
        return float(
            sum(np.sum(self.unknowns(a) ** 2) for a in range(self.grid.dim))
            * self.grid.cell_volume
        )

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(c)) for c in self.components))


def as_vector(values: Sequence[float], dim: int) -> np.ndarray:
    """Validate a constant vector (e.g. the potential gradient) against dim."""
    vec = np.asarray(values, dtype=float)
    if vec.shape != (dim,):
        raise ConfigError(f"expected a vector of length {dim}, got {tuple(values)}")
    return vec
