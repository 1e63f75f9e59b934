"""
Helper utility functions.
"""

import numpy as np


def floored(values: np.ndarray, floor: float) -> tuple[np.ndarray, int]:
    """
    Replace entries below a positive floor by the floor.

    Args:
        values: Array used as a denominator
        floor: Smallest admissible magnitude

    Returns:
        Tuple of (floored copy, number of entries that were floored)
    """
    mask = values < floor
    return np.where(mask, floor, values), int(np.count_nonzero(mask))


def format_float(value: float) -> str:
    """Round-trip exact text form of a float (used for byte-identical output)."""
    return repr(float(value))
