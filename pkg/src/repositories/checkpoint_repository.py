"""
Repository for checkpoints: every field (ghost layers included), the clock,
the report history and the cumulative ledger in one compressed npz file.
"""

import os
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from models.grid import Grid, ScalarField, VectorField
from models.reports import CumulativeLedger, EnergyReport
from models.state import State

_REPORT_FIELDS = tuple(f.name for f in fields(EnergyReport))
_INT_FIELDS = ("floored_cells", "negative_n_cells")


@dataclass
class Checkpoint:
    """Everything needed to resume a run bit-for-bit."""

    state: State
    ledger: CumulativeLedger
    history: list[EnergyReport]
    report_count: int
    snapshot_count: int = 0


class CheckpointRepository:
    """Saves and loads the single checkpoint file of a run directory."""

    def __init__(self, path: Path):
        self.path = Path(path)

    def exists(self) -> bool:
        return self.path.exists()

    def save(self, checkpoint: Checkpoint) -> None:
        """Write atomically so the previous checkpoint survives a failed write."""
        state = checkpoint.state
        grid = state.grid
        arrays = {
            "extents": np.asarray(grid.extents, dtype=float),
            "cells": np.asarray(grid.cells, dtype=np.int64),
            "t": np.asarray(state.t, dtype=float),
            "step": np.asarray(state.step, dtype=np.int64),
            "report_count": np.asarray(checkpoint.report_count, dtype=np.int64),
            "snapshot_count": np.asarray(checkpoint.snapshot_count, dtype=np.int64),
            "n": state.n.data,
            "c": state.c.data,
            "pressure": state.pressure.data,
        }
        for a, comp in enumerate(state.u.components):
            arrays[f"u{a}"] = comp
        for name in _REPORT_FIELDS:
            arrays[f"history_{name}"] = np.asarray(
                [getattr(rep, name) for rep in checkpoint.history], dtype=float
            )
        arrays.update(checkpoint.ledger.to_arrays())

        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_name(self.path.stem + ".tmp.npz")
        np.savez_compressed(tmp, **arrays)
        os.replace(tmp, self.path)

    def load(self) -> Checkpoint:
        """Read the checkpoint back."""
        with np.load(self.path) as data:
            grid = Grid(
                tuple(float(e) for e in data["extents"]),
                tuple(int(n) for n in data["cells"]),
            )
            u = VectorField(grid, [data[f"u{a}"].copy() for a in range(grid.dim)])
            state = State(
                t=float(data["t"]),
                n=ScalarField(grid, data["n"].copy()),
                c=ScalarField(grid, data["c"].copy()),
                u=u,
                pressure=ScalarField(grid, data["pressure"].copy()),
                step=int(data["step"]),
            )
            count = len(data["history_t"])
            history = []
            for k in range(count):
                entries = {name: float(data[f"history_{name}"][k]) for name in _REPORT_FIELDS}
                for name in _INT_FIELDS:
                    entries[name] = int(entries[name])
                history.append(EnergyReport(**entries))
            return Checkpoint(
                state=state,
                ledger=CumulativeLedger.from_arrays(data),
                history=history,
                report_count=int(data["report_count"]),
                snapshot_count=int(data["snapshot_count"]),
            )
