import math

import numpy as np
import pytest

from services import exponent_calculator
from services.exponent_calculator import (
    admissible_m_range,
    bootstrap_closed_form,
    bootstrap_recursion,
    bootstrap_schedule,
    conjugate,
    in_range,
    lemma32_identity_residual,
    lemma32_theta,
    lemma32_young_ok,
    lemma51_exponents,
    lemma53_theta,
    max_integrability_exponent,
)
from utils.exceptions import DomainError, IntegrabilityRangeError, RangeViolationError


class TestAdmissibleRange:
    def test_threshold_pair_is_empty_above_one(self):
        m_range = admissible_m_range(1.0, 25.0 / 12.0)
        assert m_range.upper - 1.0 == pytest.approx(0.0, abs=1e-14)
        assert not in_range(m_range, 1.0 + 1e-9)

    def test_known_values(self):
        m_range = admissible_m_range(1.0, 3.0)
        assert m_range.lower == pytest.approx(1.125, abs=1e-15)
        assert m_range.upper == pytest.approx(14.0 / 3.0, abs=1e-14)
        assert m_range.nonempty

        m_range = admissible_m_range(2.0, 2.0)
        assert m_range.lower == pytest.approx(1.0, abs=1e-15)
        assert m_range.upper == pytest.approx(4.0 / 3.0, abs=1e-15)
        assert m_range.nonempty

    def test_gap_identity_on_random_points(self, rng):
        m0 = rng.uniform(1.0, 10.0, 2000)
        p = rng.uniform(4.0 / 3.0 + 1e-3, 5.0, 2000)
        residuals = [admissible_m_range(a, b).gap_identity_residual for a, b in zip(m0, p)]
        assert max(residuals) <= 1e-12

    def test_upper_bound_is_inclusive(self):
        m_range = admissible_m_range(1.0, 3.0)
        assert in_range(m_range, m_range.upper)
        assert not in_range(m_range, m_range.lower)

    @pytest.mark.parametrize("m0,p", [(1.0, 4.0 / 3.0), (1.0, 1.2), (0.5, 2.5)])
    def test_domain_errors(self, m0, p):
        with pytest.raises(DomainError):
            admissible_m_range(m0, p)


class TestStepExponents:
    def test_self_conjugate(self):
        assert conjugate(2.0) == 2.0

    def test_table_inside_range(self):
        table = lemma51_exponents(1.0, 2.0, 3.0)
        assert table.valid.all_ok
        assert table.m_star == pytest.approx(1.0)
        assert table.beta == pytest.approx(1.5)
        assert table.alpha == pytest.approx(8.0 / 5.0)
        assert table.alpha_prime == pytest.approx(8.0 / 3.0)
        assert 0.0 < table.theta51 < 1.0
        assert table.beta * table.alpha * table.theta51 / table.m_star <= table.p + 1e-12
        assert table.max_identity_residual() <= 1e-12

    def test_identities_on_random_admissible_points(self, rng):
        for _ in range(200):
            p = rng.uniform(2.2, 4.0)
            m0 = rng.uniform(1.0, 4.0)
            m_range = admissible_m_range(m0, p)
            m = rng.uniform(m_range.lower, m_range.upper)
            if m <= m_range.lower:
                continue
            table = lemma51_exponents(m0, m, p)
            assert table.valid.all_ok
            assert table.max_identity_residual() <= 1e-10

    def test_out_of_range_reports_bounds(self):
        with pytest.raises(RangeViolationError) as info:
            lemma51_exponents(1.0, 10.0, 3.0)
        assert info.value.lower == pytest.approx(1.125)
        assert info.value.upper == pytest.approx(14.0 / 3.0)

    def test_lenient_mode_flags_range(self):
        table = lemma51_exponents(1.0, 10.0, 3.0, strict=False)
        assert not table.valid.range_ok
        assert not table.valid.all_ok


class TestGradientExponent:
    def test_value_at_two(self):
        theta = lemma32_theta(2.0)
        assert theta == 0.25
        assert lemma32_identity_residual(2.0, theta) <= 1e-12
        assert lemma32_young_ok(2.0)

    def test_young_condition_threshold(self):
        assert lemma32_young_ok(1.8)
        assert not lemma32_young_ok(1.7)

    @pytest.mark.parametrize("p", [1.5, 1.4, 1.55])
    def test_domain_errors(self, p):
        with pytest.raises(DomainError):
            lemma32_theta(p)

    def test_young_condition_enforced_above_threshold(self, monkeypatch):
        monkeypatch.setattr(exponent_calculator, "lemma32_young_ok", lambda p: False)
        assert lemma32_theta(1.7) == pytest.approx(0.7 / 1.6)
        with pytest.raises(DomainError, match="Young"):
            lemma32_theta(2.0)


class TestIntegrabilityExponent:
    def test_known_values(self):
        assert lemma53_theta(1.0, 2.5) == 0.0
        assert lemma53_theta(6.0, 2.2) == pytest.approx(33.0 / 34.8, rel=1e-14)
        assert max_integrability_exponent(2.2) == pytest.approx(8.25)
        assert math.isinf(max_integrability_exponent(3.0))

    def test_upper_end_is_excluded(self):
        with pytest.raises(IntegrabilityRangeError):
            lemma53_theta(15.0, 2.5)

    def test_requires_theorem_regime(self):
        with pytest.raises(DomainError):
            lemma53_theta(2.0, 2.1)


class TestBootstrap:
    def test_crossing_index(self):
        schedule = bootstrap_schedule(0.01)
        assert schedule.delta1 == pytest.approx(math.log(24 / 5) / math.log(100 / 81), rel=1e-12)
        assert schedule.delta1 == pytest.approx(7.44, abs=5e-3)
        assert schedule.m_values[0] == 1.0
        assert schedule.m_values[1] == pytest.approx(1.24, abs=1e-14)
        assert schedule.crossing_index == 8
        assert schedule.m_values[8] >= 2.0 > schedule.m_values[7]
        assert schedule.limit == pytest.approx(2.15 / 0.95, rel=1e-14)
        assert schedule.closed_form_residual <= 1e-12
        assert schedule.all_steps_admissible

    @pytest.mark.parametrize("delta", [0.001, 0.01, 0.05, 0.099])
    def test_recursion_matches_closed_form(self, delta):
        for k in range(21):
            assert abs(bootstrap_recursion(delta, k) - bootstrap_closed_form(delta, k)) <= 1e-12

    @pytest.mark.parametrize("delta", [0.0, 0.1, -0.01])
    def test_domain_errors(self, delta):
        with pytest.raises(DomainError):
            bootstrap_schedule(delta)

    def test_every_start_is_one(self):
        for delta in np.linspace(0.005, 0.095, 7):
            assert bootstrap_schedule(float(delta)).m_values[0] == 1.0
