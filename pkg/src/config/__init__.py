"""
Configuration package: constants, enums and the TOML run configuration.

run_config is imported from its module (config.run_config) since it depends
on the models package, which itself imports the constants defined here.
"""

from .constants import (
    AuditConstants,
    ExponentConstants,
    ModelConstants,
    OracleConstants,
    OutputConstants,
    SolverConstants,
)
from .enums import (
    BoundaryCondition,
    DensityProfile,
    DiffusionRegime,
    ExitCode,
    OperatorId,
    PairKind,
    SolveMethod,
    VelocityProfile,
)

__all__ = [
    "AuditConstants",
    "ExponentConstants",
    "ModelConstants",
    "OracleConstants",
    "OutputConstants",
    "SolverConstants",
    "BoundaryCondition",
    "DensityProfile",
    "DiffusionRegime",
    "ExitCode",
    "OperatorId",
    "PairKind",
    "SolveMethod",
    "VelocityProfile",
]
