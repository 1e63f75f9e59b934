"""
Services package: numerical kernels, solvers, the estimate auditor and the
run orchestration built on top of them.
"""

from .flow_solver import FlowSolver
from .simulation_manager import SimulationManager
from .transport_solver import TransportSolver

__all__ = ["SimulationManager", "FlowSolver", "TransportSolver"]
