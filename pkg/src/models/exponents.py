"""
Result types of the exponent calculator.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class MRange:
    """Admissible m for a given (m0, p): lower < m <= upper."""

    m0: float
    p: float
    lower: float
    upper: float
    gap_identity_residual: float

    @property
    def nonempty(self) -> bool:
        return self.upper > self.lower

    @property
    def gap(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class ExponentValidity:
    """Validity flags of an exponent table."""

    range_ok: bool
    theta_in_unit_interval: bool
    young_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.range_ok and self.theta_in_unit_interval and self.young_ok


@dataclass(frozen=True)
class ExponentTable:
    """Every derived exponent of the L^m propagation step for (m0, m, p)."""

    p: float
    p_prime: float
    m0: float
    m: float
    m_star: float
    beta: float
    alpha: float
    alpha_prime: float
    theta51: float
    young_slack: float  # beta*theta*alpha/m_star - p, must be <= 0
    valid: ExponentValidity
    m_range: MRange
    # residual of each closed-form identity against direct evaluation
    identity_residuals: dict[str, float] = field(default_factory=dict)

    def max_identity_residual(self) -> float:
        return max(self.identity_residuals.values(), default=0.0)


@dataclass(frozen=True)
class BootstrapSchedule:
    """Exponent schedule m_k raising integrability from m_0 = 1 up to 2."""

    delta: float
    p: float
    m_values: tuple[float, ...]
    delta1: float
    crossing_index: int  # first k with m_k >= 2
    limit: float  # m_k -> limit as k -> infinity
    closed_form_residual: float
    steps_admissible: tuple[bool, ...] = ()

    @property
    def all_steps_admissible(self) -> bool:
        return all(self.steps_admissible)
