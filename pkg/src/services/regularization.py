"""
Regularizer F_eps, energy weight Psi and the structural-condition validator.
"""

import numpy as np
from scipy import integrate

from config.constants import ModelConstants
from logger import logger
from models.reports import ConditionResult, ValidationReport
from models.sensitivity import SensitivityPair
from utils.exceptions import (
    DomainError,
    InvalidSensitivityPairError,
    StructuralConditionError,
)


def _checked(s, eps: float) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if eps <= 0.0:
        raise DomainError(f"epsilon must be positive, got {eps}")
    if np.any(s < 0.0) or np.any(np.isnan(s)):
        raise DomainError("F_eps is defined for s >= 0 only")
    return s


def _same_kind(result: np.ndarray, like):
    return float(result) if np.ndim(like) == 0 else result


def f_eps(s, eps: float):
    """
    Regularizer F_eps(s) = ln(1 + eps*s)/eps.

    Satisfies 0 <= F_eps(s) <= s and increases to s as eps decreases to 0.

    Raises:
        DomainError: If s < 0 or eps <= 0
    """
    s_arr = _checked(s, eps)
    return _same_kind(np.log1p(eps * s_arr) / eps, s)


def f_eps_prime(s, eps: float):
    """
    Derivative F_eps'(s) = 1/(1 + eps*s), in [0, 1].

    Raises:
        DomainError: If s < 0 or eps <= 0
    """
    s_arr = _checked(s, eps)
    return _same_kind(1.0 / (1.0 + eps * s_arr), s)


def consumption_weight(n: np.ndarray, eps: float) -> np.ndarray:
    """F_eps(n+) for field arrays; negative cells contribute as zero."""
    return np.log1p(eps * np.maximum(n, 0.0)) / eps


def saturated_density(n: np.ndarray, eps: float) -> np.ndarray:
    """n+ F_eps'(n+) = n+/(1 + eps*n+), the chemotactic mobility, bounded by 1/eps."""
    n_pos = np.maximum(n, 0.0)
    return n_pos / (1.0 + eps * n_pos)


def psi_quadrature(s: float, pair: SensitivityPair) -> float:
    """
    Psi(s) by adaptive quadrature.

    Integrates in tau = sqrt(sigma), so Psi(s) = int_1^sqrt(s) 2 tau/sqrt(g(tau^2)) dtau,
    which removes the sigma^(-1/2) endpoint singularity of pairs with f(0) = 0.

    Raises:
        StructuralConditionError: If g <= 0 at a quadrature node
    """

    def integrand(tau: float) -> float:
        g = float(pair.g(tau * tau))
        if not g > 0.0:
            raise StructuralConditionError(
                f"structural condition violated: g({tau * tau!r}) = {g!r} <= 0 "
                f"for pair '{pair.name}'"
            )
        return 2.0 * tau / np.sqrt(g)

    value, _ = integrate.quad(
        integrand,
        1.0,
        np.sqrt(s),
        epsabs=0.0,
        epsrel=ModelConstants.PSI_RTOL,
        limit=ModelConstants.PSI_QUAD_LIMIT,
    )
    return float(value)


def psi(s: float, pair: SensitivityPair) -> float:
    """
    Energy weight Psi(s) = int_1^s dsigma/sqrt(g(sigma)) with g = f/chi.

    Closed form 2(sqrt(s) - 1) for the linear pair, quadrature otherwise.

    Raises:
        DomainError: If s < 0
        StructuralConditionError: If g <= 0 inside the integration interval
    """
    if not s >= 0.0:
        raise DomainError(f"psi is defined for s >= 0 only, got {s}")
    if pair.is_linear:
        return 2.0 * (np.sqrt(s) - 1.0)
    return psi_quadrature(s, pair)


def _worst(name: str, s: np.ndarray, margin: np.ndarray, value: np.ndarray, ok: bool, advisory=False):
    k = int(np.argmin(margin))
    return ConditionResult(
        name=name,
        passed=bool(ok),
        worst_s=float(s[k]),
        worst_value=float(value[k]),
        advisory=advisory,
    )


def validate_structural_conditions(
    pair: SensitivityPair,
    s_max: float,
    samples: int = ModelConstants.VALIDATION_SAMPLES,
    tol: float = ModelConstants.VALIDATION_TOL,
) -> ValidationReport:
    """
    Check the structural conditions of (chi, f) on [0, s_max].

    Conditions: chi > 0, f >= 0, f(0) = 0, (f/chi)' > 0, (f/chi)'' <= 0 and
    (chi f)' >= 0, the derivatives by centered finite differences. Sign
    tolerances are relative to the magnitude of the differenced values so the
    verdict does not depend on the scale of s_max. f > 0 on (0, s_max] is
    reported as an advisory that never gates.

    Args:
        pair: Sensitivity pair to check
        s_max: Right end of the sample interval (the largest oxygen value)
        samples: Number of equispaced sample points
        tol: Relative tolerance

    Returns:
        ValidationReport listing each condition with its worst sample

    Raises:
        DomainError: If s_max <= 0 or samples < 3
        InvalidSensitivityPairError: If chi or f are not finite on the samples
    """
    if not s_max > 0.0:
        raise DomainError(f"s_max must be positive, got {s_max}")
    if samples < 3:
        raise DomainError(f"need at least 3 samples, got {samples}")

    s = np.linspace(0.0, s_max, samples)
    h = s[1] - s[0]
    chi = pair.chi(s)
    f = pair.f(s)
    if not (np.all(np.isfinite(chi)) and np.all(np.isfinite(f))):
        raise InvalidSensitivityPairError(
            f"invalid sensitivity pair '{pair.name}': non-finite chi or f on [0, {s_max}]"
        )
    g = f / chi
    chi_f = chi * f
    if not (np.all(np.isfinite(g))):
        raise InvalidSensitivityPairError(
            f"invalid sensitivity pair '{pair.name}': f/chi not finite on [0, {s_max}]"
        )

    mid = s[1:-1]
    # centered first and second differences (unscaled)
    dg = g[2:] - g[:-2]
    d2g = g[2:] - 2.0 * g[1:-1] + g[:-2]
    d_chi_f = chi_f[2:] - chi_f[:-2]
    g_scale = np.abs(g[2:]) + 2.0 * np.abs(g[1:-1]) + np.abs(g[:-2])
    cf_scale = np.abs(chi_f[2:]) + np.abs(chi_f[:-2])
    f_scale = max(float(np.max(np.abs(f))), 1.0)

    conditions = (
        _worst("chi_positive", s, chi, chi, np.all(chi > 0.0)),
        _worst("f_nonnegative", s, f, f, np.all(f >= -tol * f_scale)),
        ConditionResult(
            name="f_zero_at_zero",
            passed=bool(abs(f[0]) <= tol),
            worst_s=0.0,
            worst_value=float(f[0]),
        ),
        _worst("g_increasing", mid, dg, dg / (2.0 * h), np.all(dg > 0.0)),
        _worst(
            "g_concave",
            mid,
            -d2g,
            d2g / (h * h),
            np.all(d2g <= tol * g_scale),
        ),
        _worst(
            "chi_f_nondecreasing",
            mid,
            d_chi_f,
            d_chi_f / (2.0 * h),
            np.all(d_chi_f >= -tol * cf_scale),
        ),
        _worst("f_positive", s[1:], f[1:], f[1:], np.all(f[1:] > 0.0), advisory=True),
    )
    return ValidationReport(pair_name=pair.name, s_max=float(s_max), conditions=conditions)


def require_structural_conditions(pair: SensitivityPair, s_max: float) -> ValidationReport:
    """
    Gate used before any stepping.

    An oxygen-free start (s_max = 0) is checked on [0, 1] instead.

    Raises:
        StructuralConditionError: If any gating condition fails
    """
    interval = s_max if s_max > 0.0 else 1.0
    report = validate_structural_conditions(pair, interval)
    for advisory in (c for c in report.conditions if c.advisory and not c.passed):
        logger.warning(
            f"Advisory condition '{advisory.name}' fails for pair '{pair.name}' "
            f"at s={advisory.worst_s:g}"
        )
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise StructuralConditionError(
            f"structural condition violated for pair '{pair.name}' on [0, {interval:g}]: {names}"
        )
    logger.debug(f"Structural conditions pass for pair '{pair.name}' on [0, {interval:g}]")
    return report
