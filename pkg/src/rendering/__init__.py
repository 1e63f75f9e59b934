"""
Rendering module: terminal tables and field plots.
"""

from .cli_renderer import CLIRenderer
from .field_plotter import plot_state

__all__ = ["CLIRenderer", "plot_state"]
