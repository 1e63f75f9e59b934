"""
Type-safe enums for simulator logic.
Prevents string typos in configuration files and operator dispatch.
"""

from enum import Enum, IntEnum


class BoundaryCondition(Enum):
    """Homogeneous boundary conditions applied through ghost cells."""

    NEUMANN_ZERO = "neumann_zero"
    DIRICHLET_ZERO = "dirichlet_zero"


class PairKind(Enum):
    """Registered families of sensitivity pairs (chi, f)."""

    LINEAR = "linear"
    AFFINE_TABLE = "affine-table"


class DiffusionRegime(Enum):
    """Where the diffusion exponent p sits relative to the existence theorem."""

    THEOREM = "theorem"
    SLOW = "slow"
    FAST_DIFFUSION = "fast-diffusion"

    @classmethod
    def classify(cls, p: float, theorem_p: float) -> "DiffusionRegime":
        """Classify a diffusion exponent."""
        if p < 2.0:
            return cls.FAST_DIFFUSION
        if p > theorem_p:
            return cls.THEOREM
        return cls.SLOW


class DensityProfile(Enum):
    """Initial-condition shapes for the scalar fields."""

    CONSTANT = "constant"
    GAUSSIAN = "gaussian"


class VelocityProfile(Enum):
    """Initial-condition shapes for the velocity field."""

    ZERO = "zero"
    VORTEX = "vortex"


class OperatorId(Enum):
    """Linear operators that the dense oracle can assemble."""

    LAPLACIAN_NEUMANN = "laplacian_neumann"
    LAPLACIAN_DIRICHLET = "laplacian_dirichlet"
    GRADIENT = "gradient"
    DIVERGENCE = "divergence"
    PROJECTION = "projection"


class SolveMethod(Enum):
    """Linear-solve strategies for the Poisson and Yosida problems."""

    DIRECT = "direct"
    CG = "cg"


class ExitCode(IntEnum):
    """Process exit codes of the CLI."""

    PASS = 0
    INVARIANT_VIOLATION = 2
    BLOW_UP = 3
    CONFIG_ERROR = 4
