"""
Repository for field snapshots.

Each field is written to its own file: a plain-text header terminated by an
END_HEADER line, followed by the interior values as little-endian float64 in
C order. An optional legacy VTK structured-points file bundles n, c and the
cell-averaged velocity of a snapshot for visualization tools.
"""

from pathlib import Path

import numpy as np

from models.grid import Grid
from models.state import State

END_HEADER = "END_HEADER"


class SnapshotRepository:
    """Writes and reads snapshot files under one directory."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)

    def _fields(self, state: State) -> dict[str, np.ndarray]:
        fields = {"n": state.n.interior, "c": state.c.interior}
        for a, comp in enumerate(state.u.to_cells()):
            fields[f"u{a}"] = comp
        fields["pressure"] = state.pressure.interior
        return fields

    def save(self, state: State, index: int) -> list[Path]:
        """Write every field of a state; returns the written paths."""
        self.directory.mkdir(parents=True, exist_ok=True)
        grid = state.grid
        paths = []
        for name, values in self._fields(state).items():
            path = self.directory / f"{name}_{index:05d}.bin"
            header = "\n".join(
                [
                    f"field {name}",
                    "dims " + " ".join(str(n) for n in grid.cells),
                    "extents " + " ".join(repr(float(e)) for e in grid.extents),
                    f"time {state.t!r}",
                    f"step {state.step}",
                    f"count {values.size}",
                    "dtype float64-le",
                    END_HEADER,
                ]
            )
            with path.open("wb") as f:
                f.write((header + "\n").encode("ascii"))
                f.write(np.ascontiguousarray(values, dtype="<f8").tobytes())
            paths.append(path)
        return paths

    @staticmethod
    def load(path: Path) -> tuple[dict[str, str], np.ndarray]:
        """
        Read one snapshot file.

        Returns:
            Tuple of (header entries, values reshaped to the grid dims)
        """
        raw = Path(path).read_bytes()
        marker = (END_HEADER + "\n").encode("ascii")
        split = raw.index(marker) + len(marker)
        header = {}
        for line in raw[:split].decode("ascii").splitlines()[:-1]:
            key, _, value = line.partition(" ")
            header[key] = value
        dims = tuple(int(n) for n in header["dims"].split())
        values = np.frombuffer(raw[split:], dtype="<f8", count=int(header["count"]))
        return header, values.reshape(dims)

    def save_vtk(self, state: State, index: int) -> Path:
        """Legacy ASCII VTK structured points with cell data."""
        self.directory.mkdir(parents=True, exist_ok=True)
        grid: Grid = state.grid
        path = self.directory / f"state_{index:05d}.vtk"
        dims = list(grid.cells) + [1] * (3 - grid.dim)
        spacing = list(grid.dx) + [1.0] * (3 - grid.dim)

        def column(values: np.ndarray) -> np.ndarray:
            # VTK runs x fastest
            return np.asarray(values).ravel(order="F")

        cell_u = state.u.to_cells()
        while len(cell_u) < 3:
            cell_u.append(np.zeros(grid.cells))
        vectors = np.stack([column(v) for v in cell_u], axis=1)

        lines = [
            "# vtk DataFile Version 3.0",
            f"chemotaxis state t={state.t!r}",
            "ASCII",
            "DATASET STRUCTURED_POINTS",
            "DIMENSIONS " + " ".join(str(n + 1) for n in dims),
            "ORIGIN 0 0 0",
            "SPACING " + " ".join(repr(float(h)) for h in spacing),
            f"CELL_DATA {grid.cell_count}",
        ]
        for name in ("n", "c"):
            field = state.n if name == "n" else state.c
            lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
            lines += [repr(float(v)) for v in column(field.interior)]
        lines.append("VECTORS u double")
        lines += [" ".join(repr(float(v)) for v in row) for row in vectors]
        path.write_text("\n".join(lines) + "\n")
        return path
