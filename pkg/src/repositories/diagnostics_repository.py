"""
Repository for the diagnostics CSV stream.
"""

import csv
from pathlib import Path
from typing import Sequence

from config.constants import OutputConstants
from utils.helpers import format_float


def _format(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


class DiagnosticsRepository:
    """
    One CSV row per energy report, in a fixed column order.

    Floats are written with repr so repeated runs produce identical bytes.
    """

    def __init__(self, path: Path, columns: Sequence[str] = OutputConstants.DIAGNOSTICS_COLUMNS):
        self.path = Path(path)
        self.columns = tuple(columns)

    def start(self) -> None:
        """Create the file with its header row, replacing any previous stream."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("w", newline="") as f:
            csv.writer(f, lineterminator="\n").writerow(self.columns)

    def append(self, row: dict) -> None:
        """Append one row; keys outside the column list are ignored."""
        if not self.path.exists():
            self.start()
        with self.path.open("a", newline="") as f:
            writer = csv.DictWriter(
                f, fieldnames=self.columns, extrasaction="ignore", lineterminator="\n"
            )
            writer.writerow({k: _format(v) for k, v in row.items()})

    def read(self) -> list[dict[str, str]]:
        """All rows as strings keyed by column name."""
        if not self.path.exists():
            return []
        with self.path.open(newline="") as f:
            return list(csv.DictReader(f))

    def truncate_after(self, t: float) -> int:
        """
        Drop rows later than t (used when a run resumes from a checkpoint).

        Returns:
            Number of rows kept
        """
        rows = [r for r in self.read() if float(r["t"]) <= t]
        with self.path.open("w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=self.columns, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return len(rows)
