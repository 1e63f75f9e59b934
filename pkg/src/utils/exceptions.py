"""
Custom exceptions for the simulator and the estimate auditor.
"""


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""

    pass


class ConfigError(SimulationError):
    """Exception raised when a run configuration or model parameter is invalid."""

    pass


class StructuralConditionError(SimulationError):
    """Exception raised when the sensitivity pair violates its structural conditions."""

    pass


class InvalidSensitivityPairError(SimulationError):
    """Exception raised when chi or f produce non-finite values."""

    pass


class DomainError(SimulationError, ValueError):
    """Exception raised when a function is evaluated outside its domain."""

    pass


class RangeViolationError(DomainError):
    """Exception raised when m lies outside the admissible exponent range."""

    def __init__(self, m: float, lower: float, upper: float):
        self.m = m
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"range violation: m={m!r} not in ({lower!r}, {upper!r}]"
        )


class IntegrabilityRangeError(DomainError):
    """Exception raised when r lies outside the integrability range."""

    pass


class FastDiffusionUnsupportedError(SimulationError):
    """Exception raised when the p-Laplacian operator is asked for p < 2."""

    pass


class SolverConvergenceError(SimulationError):
    """Exception raised when an iterative or direct solve misses its residual target."""

    def __init__(self, solver: str, residual: float, target: float):
        self.solver = solver
        self.residual = residual
        self.target = target
        super().__init__(
            f"{solver} did not converge: residual {residual:.3e} > target {target:.3e}"
        )


class BlowUpError(SimulationError):
    """Exception raised when a field becomes NaN or infinite."""

    def __init__(self, step: int, field_name: str):
        self.step = step
        self.field_name = field_name
        super().__init__(f"blow-up detected in '{field_name}' at step {step}")


class StiffnessAbortError(SimulationError):
    """Exception raised when the stable time step underflows."""

    def __init__(self, dt: float, constraint: str):
        self.dt = dt
        self.constraint = constraint
        super().__init__(f"stiffness abort: dt={dt:.3e} limited by {constraint}")


class DiagnosticOverflowError(SimulationError):
    """Exception raised when an energy report entry is not finite."""

    def __init__(self, term: str):
        self.term = term
        super().__init__(f"diagnostic overflow in term '{term}'")


class PreconditionError(SimulationError):
    """Exception raised when an audit check is called with unusable input."""

    pass


class OracleSizeError(SimulationError):
    """Exception raised when a dense oracle is requested above its size cap."""

    pass
