"""
Simulation state: the fields n, c, u and the diagnostic pressure at one instant.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import Grid, ScalarField, VectorField


@dataclass
class State:
    """Bacterial density n, oxygen c, velocity u and pressure at time t."""

    t: float
    n: ScalarField
    c: ScalarField
    u: VectorField
    pressure: ScalarField
    step: int = 0

    @property
    def grid(self) -> Grid:
        return self.n.grid

    @classmethod
    def at_rest(
        cls, grid: Grid, n: ScalarField, c: ScalarField, u: Optional[VectorField] = None
    ) -> "State":
        """State at t = 0 with zero pressure (and zero velocity unless given)."""
        return cls(
            t=0.0,
            n=n,
            c=c,
            u=u if u is not None else VectorField.zeros(grid),
            pressure=ScalarField.zeros(grid),
        )

    def copy(self) -> "State":
        return State(
            t=self.t,
            n=self.n.copy(),
            c=self.c.copy(),
            u=self.u.copy(),
            pressure=self.pressure.copy(),
            step=self.step,
        )

    def first_non_finite(self) -> Optional[str]:
        """Name of the first field holding NaN/Inf, or None."""
        for name, arrays in (
            ("n", [self.n.data]),
            ("c", [self.c.data]),
            ("u", self.u.components),
            ("pressure", [self.pressure.data]),
        ):
            if not all(np.all(np.isfinite(a)) for a in arrays):
                return name
        return None
