"""
Utility package for helpers, colours and exceptions.
"""

from .colors import Colors
from .helpers import floored, format_float

__all__ = ["Colors", "floored", "format_float"]
