"""
Models package for the simulator's domain data structures.
"""

from .exponents import BootstrapSchedule, ExponentTable, ExponentValidity, MRange
from .grid import Grid, ScalarField, VectorField
from .params import ModelParams
from .reports import (
    CheckVerdict,
    ConditionResult,
    CumulativeLedger,
    EnergyReport,
    ExitReport,
    ValidationReport,
)
from .sensitivity import PAIR_REGISTRY, SensitivityPair, get_pair
from .state import State

__all__ = [
    "BootstrapSchedule",
    "ExponentTable",
    "ExponentValidity",
    "MRange",
    "Grid",
    "ScalarField",
    "VectorField",
    "ModelParams",
    "CheckVerdict",
    "ConditionResult",
    "CumulativeLedger",
    "EnergyReport",
    "ExitReport",
    "ValidationReport",
    "PAIR_REGISTRY",
    "SensitivityPair",
    "get_pair",
    "State",
]
