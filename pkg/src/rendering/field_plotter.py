"""
Matplotlib panels of n, c and |u| for one snapshot.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from models.state import State  # noqa: E402


def _plane(values: np.ndarray) -> np.ndarray:
    """2D fields as they are; 3D fields cut at the middle layer of the last axis."""
    if values.ndim == 3:
        return values[:, :, values.shape[2] // 2]
    return values


def plot_state(state: State, path: Path) -> Path:
    """Write a three-panel PNG of the state and return its path."""
    grid = state.grid
    speed = np.sqrt(sum(v * v for v in state.u.to_cells()))
    panels = (
        ("n", state.n.interior),
        ("c", state.c.interior),
        ("|u|", speed),
    )
    extent = (0.0, grid.extents[0], 0.0, grid.extents[1])

    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    for ax, (title, values) in zip(axes, panels):
        image = ax.imshow(_plane(values).T, origin="lower", extent=extent, cmap="viridis")
        ax.set_title(f"{title}  t={state.t:.4g}")
        ax.set_xlabel("x0")
        ax.set_ylabel("x1")
        fig.colorbar(image, ax=ax, shrink=0.8)
    plt.tight_layout()

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    plt.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path
