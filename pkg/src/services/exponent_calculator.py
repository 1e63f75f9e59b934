"""
Exponent arithmetic of the L^m bootstrap: admissible ranges, interpolation
exponents and the m_k schedule, each cross-checked against its closed form.
"""

import math

import numpy as np

from config.constants import ExponentConstants, ModelConstants
from models.exponents import BootstrapSchedule, ExponentTable, ExponentValidity, MRange
from utils.exceptions import DomainError, IntegrabilityRangeError, RangeViolationError

TOL = ExponentConstants.IDENTITY_TOL


def _require_p(p: float, bound: float, label: str) -> None:
    if not np.isfinite(p) or p <= bound:
        raise DomainError(f"{label} requires p > {bound:g}, got {p}")


def conjugate(p: float) -> float:
    """Hoelder conjugate p' = p/(p-1)."""
    _require_p(p, 1.0, "conjugate exponent")
    return p / (p - 1.0)


def admissible_m_range(m0: float, p: float) -> MRange:
    """
    Admissible m for one propagation step from L^m0 to L^m:

        m0(3p-4)/(4(p-1)) + (p-2)/(p-1) < m <= m0(p - 4/3) + 3(p-2)

    The width is cross-checked against (3p-4)(m0(4p-7) + 12(p-2))/(12(p-1)).

    Raises:
        DomainError: If p <= 4/3 or m0 < 1
    """
    _require_p(p, 4.0 / 3.0, "admissible_m_range")
    if m0 < 1.0:
        raise DomainError(f"m0 must be >= 1, got {m0}")
    lower = m0 * (3.0 * p - 4.0) / (4.0 * (p - 1.0)) + (p - 2.0) / (p - 1.0)
    upper = m0 * (p - 4.0 / 3.0) + 3.0 * (p - 2.0)
    gap = (3.0 * p - 4.0) * (m0 * (4.0 * p - 7.0) + 12.0 * (p - 2.0)) / (12.0 * (p - 1.0))
    return MRange(
        m0=m0,
        p=p,
        lower=lower,
        upper=upper,
        gap_identity_residual=abs((upper - lower) - gap),
    )


def in_range(m_range: MRange, m: float) -> bool:
    """Membership with round-off slack on the inclusive upper end."""
    return m_range.lower < m <= m_range.upper + TOL * max(1.0, abs(m_range.upper))


def lemma51_exponents(m0: float, m: float, p: float, strict: bool = True) -> ExponentTable:
    """
    Fill the exponent table of one L^m0 -> L^m step.

    m_* = (m-2)/p + 1, beta = m + 1/(p-1) - 1, alpha = 4(p-1)/(3p-4),
    alpha' = 4(p-1)/p and theta the Gagliardo-Nirenberg exponent solving
    m_*/(beta alpha) = theta (1/p - 1/3) + (1 - theta) m_*/m0.

    Args:
        m0: Known integrability exponent (>= 1)
        m: Target exponent
        p: Diffusion exponent (> 4/3)
        strict: Raise when m is outside the admissible range; otherwise the
            table is filled with range_ok = False

    Returns:
        ExponentTable with validity flags and identity residuals

    Raises:
        DomainError: If p <= 4/3 or m0 < 1
        RangeViolationError: If strict and m is not admissible
    """
    m_range = admissible_m_range(m0, p)
    range_ok = in_range(m_range, m)
    if strict and not range_ok:
        raise RangeViolationError(m, m_range.lower, m_range.upper)

    p_prime = conjugate(p)
    m_star = (m - 2.0) / p + 1.0
    beta = m + 1.0 / (p - 1.0) - 1.0
    alpha = 4.0 * (p - 1.0) / (3.0 * p - 4.0)
    alpha_prime = 4.0 * (p - 1.0) / p

    theta_den = (
        4.0
        * (m * (p - 1.0) - p + 2.0)
        * (3.0 * m + (m0 + 3.0) * p - 3.0 * (m0 + 2.0))
    )
    theta = (
        3.0
        * (m + p - 2.0)
        * (4.0 * m * (p - 1.0) + m0 * (4.0 - 3.0 * p) - 4.0 * p + 8.0)
        / theta_den
    )
    young_slack = beta * theta * alpha / m_star - p

    # closed forms of the intermediate quantities, each against direct evaluation
    negativity = -p * (4.0 * m * (p - 1.0) + m0 * (4.0 - 3.0 * p) - 4.0 * p + 8.0) / (
        (3.0 * p - 4.0) * (m + p - 2.0)
    )
    embedding = (m * (4.0 * p - 7.0) + 5.0 * (p - 2.0)) / (
        12.0 * (m * (p - 1.0) - p + 2.0)
    )
    theta_minus_one = -m0 * p * (5.0 * (p - 2.0) + (4.0 * p - 7.0) * m) / theta_den
    young_closed = (
        p**2
        * (3.0 * m - m0 * (3.0 * p - 4.0) - 9.0 * (p - 2.0))
        / ((3.0 * p - 4.0) * (3.0 * m - m0 + (m0 + 3.0) * (p - 2.0)))
    )
    interpolation = theta * (1.0 / p - 1.0 / 3.0) + (1.0 - theta) * m_star / m0
    residuals = {
        "conjugacy_alpha": abs(1.0 / alpha + 1.0 / alpha_prime - 1.0),
        "conjugacy_p": abs(1.0 / p + 1.0 / p_prime - 1.0),
        "m_star": abs(m_star * p - (m - 2.0 + p)),
        "beta": abs(beta - ((2.0 - m) / p + m - 1.0) * p_prime),
        "negativity": abs((m0 / m_star - beta * alpha / m_star) - negativity),
        "embedding": abs((m_star / (beta * alpha) - (1.0 / p - 1.0 / 3.0)) - embedding),
        "interpolation": abs(m_star / (beta * alpha) - interpolation),
        "theta_minus_one": abs((theta - 1.0) - theta_minus_one),
        "young": abs(young_slack - young_closed),
    }

    validity = ExponentValidity(
        range_ok=range_ok,
        theta_in_unit_interval=bool(0.0 < theta < 1.0),
        young_ok=bool(young_slack <= TOL * max(1.0, p)),
    )
    return ExponentTable(
        p=p,
        p_prime=p_prime,
        m0=m0,
        m=m,
        m_star=m_star,
        beta=beta,
        alpha=alpha,
        alpha_prime=alpha_prime,
        theta51=theta,
        young_slack=young_slack,
        valid=validity,
        m_range=m_range,
        identity_residuals=residuals,
    )


def lemma32_identity_residual(p: float, theta: float) -> float:
    """Residual of 5(p-1)/(6p) = theta(1/p - 1/3) + (1-theta)(p-1)/p."""
    lhs = 5.0 * (p - 1.0) / (6.0 * p)
    rhs = theta * (1.0 / p - 1.0 / 3.0) + (1.0 - theta) * (p - 1.0) / p
    return abs(lhs - rhs)


def lemma32_young_ok(p: float) -> bool:
    """2p theta/(p-1) < p, which holds exactly when p > 7/4."""
    theta = (p - 1.0) / (4.0 * (2.0 * p - 3.0))
    return 2.0 * p * theta / (p - 1.0) < p


def lemma32_theta(p: float) -> float:
    """
    Interpolation exponent theta = (p-1)/(4(2p-3)) of the gradient estimate.

    Raises:
        DomainError: If p <= 3/2, if theta falls outside (0, 1) (p <= 11/7),
            if the interpolation identity is not met to round-off or if the
            Young-step condition 2p theta/(p-1) < p fails for p > 7/4. Below
            7/4 the condition is only reported through lemma32_young_ok.
    """
    _require_p(p, 1.5, "lemma32_theta")
    theta = (p - 1.0) / (4.0 * (2.0 * p - 3.0))
    if not 0.0 < theta < 1.0:
        raise DomainError(f"interpolation exponent {theta} outside (0, 1) for p={p}")
    residual = lemma32_identity_residual(p, theta)
    if residual > TOL:
        raise DomainError(f"interpolation identity residual {residual:.3e} at p={p}")
    if p > 7.0 / 4.0 and not lemma32_young_ok(p):
        raise DomainError(f"Young-step condition 2p theta/(p-1) < p fails at p={p}")
    return theta


def max_integrability_exponent(p: float) -> float:
    """Supremum of admissible r: 3p/(3-p) for p < 3, unbounded otherwise."""
    return 3.0 * p / (3.0 - p) if p < 3.0 else math.inf


def lemma53_theta(r: float, p: float) -> float:
    """
    Exponent theta = 3p(r-1)/((4p-3)r) bounding the space-time L^r norm of n.

    Valid for p > 32/15 and 1 <= r < 3p/(3-p) (any r >= 1 once p >= 3);
    theta solves 1/r = theta(1/p - 1/3) + (1 - theta).

    Raises:
        DomainError: If p <= 32/15
        IntegrabilityRangeError: If r is outside the admissible range
    """
    _require_p(p, ModelConstants.THEOREM_P, "lemma53_theta")
    r_max = max_integrability_exponent(p)
    if not 1.0 <= r < r_max:
        raise IntegrabilityRangeError(
            f"integrability range violation: r={r} not in [1, {r_max:g}) for p={p}"
        )
    theta = 3.0 * p * (r - 1.0) / ((4.0 * p - 3.0) * r)
    residual = abs(1.0 / r - (theta * (1.0 / p - 1.0 / 3.0) + (1.0 - theta)))
    if residual > TOL:
        raise DomainError(f"integrability identity residual {residual:.3e}")
    return theta


def bootstrap_schedule(delta: float) -> BootstrapSchedule:
    """
    Schedule m_{k+1} = m_k(delta + 4/5) + 3(delta + 2/15) from m_0 = 1 at
    p = 32/15 + delta, continued to the first k with m_k >= 2.

    delta1 = log(25 delta/(20 delta + 1))/log(delta + 4/5) is the (real) index
    where the closed form m_k = a^k (1 + b) - b, b = (15 delta + 2)/(5 delta - 1),
    reaches 2. Every step is checked against the admissible range with m0 = m_k.

    Raises:
        DomainError: If delta is outside (0, 1/10)
    """
    if not 0.0 < delta < ExponentConstants.BOOTSTRAP_DELTA_MAX:
        raise DomainError(
            f"delta must lie in (0, {ExponentConstants.BOOTSTRAP_DELTA_MAX}), got {delta}"
        )
    p = ModelConstants.THEOREM_P + delta
    a = delta + 4.0 / 5.0
    c = 3.0 * (delta + 2.0 / 15.0)
    b = (15.0 * delta + 2.0) / (5.0 * delta - 1.0)
    delta1 = math.log(25.0 * delta / (20.0 * delta + 1.0)) / math.log(a)
    target = ExponentConstants.BOOTSTRAP_TARGET_M

    last = max(math.ceil(delta1), 1)
    m_values = [1.0]
    for _ in range(last):
        m_values.append(m_values[-1] * a + c)
    crossing = next(
        (k for k, m in enumerate(m_values) if m >= target - TOL), len(m_values) - 1
    )
    closed = [a**k * (1.0 + b) - b for k in range(len(m_values))]
    closed_residual = max(abs(x - y) for x, y in zip(m_values, closed))
    admissible = tuple(
        in_range(admissible_m_range(m_values[k], p), m_values[k + 1])
        for k in range(len(m_values) - 1)
    )
    return BootstrapSchedule(
        delta=delta,
        p=p,
        m_values=tuple(m_values),
        delta1=delta1,
        crossing_index=crossing,
        limit=-b,
        closed_form_residual=closed_residual,
        steps_admissible=admissible,
    )


def bootstrap_closed_form(delta: float, k: int) -> float:
    """m_k from the closed form (for comparison with the recursion)."""
    a = delta + 4.0 / 5.0
    b = (15.0 * delta + 2.0) / (5.0 * delta - 1.0)
    return a**k * (1.0 + b) - b


def bootstrap_recursion(delta: float, k: int) -> float:
    """m_k by iterating the recursion k times from m_0 = 1."""
    m = 1.0
    for _ in range(k):
        m = m * (delta + 4.0 / 5.0) + 3.0 * (delta + 2.0 / 15.0)
    return m
