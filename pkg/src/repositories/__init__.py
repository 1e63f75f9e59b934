"""
Repository layer for data persistence.
"""

from .checkpoint_repository import Checkpoint, CheckpointRepository
from .diagnostics_repository import DiagnosticsRepository
from .run_repository import RunRepository
from .snapshot_repository import SnapshotRepository

__all__ = [
    "Checkpoint",
    "CheckpointRepository",
    "DiagnosticsRepository",
    "RunRepository",
    "SnapshotRepository",
]
