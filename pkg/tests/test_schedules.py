# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from gausslike.enums import BoundFlavor, Scale, ScheduleCase, Verdict
from gausslike.models.potentials import (
    GrowthRate, Potential, growth_increment_log, log_growth, log_phi_inverse)
from gausslike.schedules import (
    DigitSchedule, EpsilonPolicy, SamplePoint, convergence_profile, em_spec,
    geometric_schedule, sample_em_point, sample_word, schedule_case,
    t4_window, t4_window_count, theorem_schedule, usef_diagnostic)
from gausslike.warning import (
    ConstructionError, DomainError, UncoveredCaseError)


N = np.arange(1, 8, dtype=float)


class TestEpsilonPolicy(object):
    def test_fixed(self):
        policy = EpsilonPolicy.fixed(0.1)
        assert policy.flavor == BoundFlavor.UPPER
        np.testing.assert_allclose(policy.log_eps(N), math.log(0.1))
        assert policy.label == 'eps=0.1'

    def test_vanishing(self):
        policy = EpsilonPolicy.vanishing()
        np.testing.assert_allclose(policy.log_eps(N), -2 * np.log(N))

    def test_ranges(self):
        with pytest.raises(DomainError):
            EpsilonPolicy.fixed(1.5)
        with pytest.raises(DomainError):
            EpsilonPolicy.vanishing(0)


class TestTheoremSchedule(object):
    def test_t1_ii(self):
        schedule = theorem_schedule(Potential.power_law(1),
                                    GrowthRate.super_exp(2),
                                    ScheduleCase.T1_II,
                                    EpsilonPolicy.fixed(0.1))
        log_s, log_t = schedule.log_window(N)
        np.testing.assert_allclose(log_s, 2 ** N)
        np.testing.assert_allclose(log_t, 2 ** N + math.log(0.3))
        assert schedule.start_index == 1
        assert schedule.case == ScheduleCase.T1_II

    def test_t3_iii(self):
        schedule = theorem_schedule(Potential.stretched_exp(0.5),
                                    GrowthRate.double_exp(2),
                                    epsilon_policy=EpsilonPolicy.vanishing(1))
        log_s, log_t = schedule.log_window(N)
        np.testing.assert_allclose(log_s, 2 ** (N + 1))
        np.testing.assert_allclose(log_t, 2 ** N - np.log(N))

    def test_t1_i2a_lower_bound(self):
        schedule = theorem_schedule(Potential.power_law(2),
                                    GrowthRate.poly_exp(0.8))
        assert schedule.case == ScheduleCase.T1_I2A
        assert schedule.epsilon_policy.flavor == BoundFlavor.LOWER
        log_s, _ = schedule.log_window(np.array([10.0]))
        expected = (10 ** 0.8 + math.log(0.8 * 10 ** -0.2)) / 2
        assert log_s[0] == pytest.approx(expected)

    def test_i2a_has_no_upper_schedule(self):
        with pytest.raises(UncoveredCaseError):
            theorem_schedule(Potential.power_law(1), GrowthRate.poly_exp(0.6),
                             epsilon_policy=EpsilonPolicy.fixed(0.1))

    def test_case_mismatch(self):
        with pytest.raises(UncoveredCaseError):
            theorem_schedule(Potential.power_law(1), GrowthRate.super_exp(2),
                             ScheduleCase.T2_II)

    def test_full_dimension_pair_has_no_schedule(self):
        with pytest.raises(UncoveredCaseError):
            schedule_case(Potential.power_law(1), GrowthRate.poly_exp(0.3))

    def test_cases(self):
        assert schedule_case(Potential.log_power(2),
                             GrowthRate.poly_exp(1.3)) == ScheduleCase.T2_I2B
        assert schedule_case(Potential.stretched_exp(0.5),
                             GrowthRate.super_exp(2)) == ScheduleCase.T3_II

    def test_head_is_digit_one(self):
        schedule = DigitSchedule(lambda n: n, lambda n: n - 1,
                                 start_index=3)
        log_s, log_t = schedule.log_window([1, 2, 3])
        np.testing.assert_array_equal(log_s, [0.0, 0.0, 3.0])
        assert log_t[0] == -np.inf
        assert log_t[2] == 2.0

    @pytest.mark.parametrize('beta', [2.0, 3.0])
    @pytest.mark.parametrize('policy, expected', [
        (EpsilonPolicy.fixed(0.1), lambda n: np.full_like(n, math.log(0.3))),
        (EpsilonPolicy.vanishing(), lambda n: -2 * np.log(n))])
    def test_t1_ii_huge_centers(self, beta, policy, expected):
        schedule = theorem_schedule(Potential.power_law(1),
                                    GrowthRate.super_exp(beta),
                                    ScheduleCase.T1_II, policy)
        assert schedule.start_index == 1
        n = np.arange(60, 101, dtype=float)
        np.testing.assert_allclose(schedule.log_offset(n), expected(n))
        proportion = schedule.proportion(100)
        assert np.all(proportion < 1)
        assert proportion[-1] == pytest.approx(np.exp(expected(100.0)))
        point = sample_word(schedule, 80, seed=1)
        assert len(point) == 80

    def test_offset_head(self):
        schedule = DigitSchedule(lambda n: n, lambda n: n - 1,
                                 start_index=3)
        offset = schedule.log_offset([1, 2, 3, 4])
        np.testing.assert_array_equal(offset, [-np.inf, -np.inf, -1, -1])

    def test_proportion(self):
        power, growth = Potential.power_law(1), GrowthRate.super_exp(2)
        fixed = theorem_schedule(power, growth)
        np.testing.assert_allclose(fixed.proportion(20), 0.3)
        vanishing = theorem_schedule(
            power, growth, epsilon_policy=EpsilonPolicy.vanishing())
        proportion = vanishing.proportion(20)
        assert np.all(np.diff(proportion) < 0)
        assert proportion[-1] == pytest.approx(1 / 400)


class TestGeometric(object):
    def test_window(self):
        schedule = geometric_schedule(10, 5)
        log_s, log_t = schedule.log_window([1, 2])
        np.testing.assert_allclose(np.exp(log_s), [20, 40])
        np.testing.assert_allclose(np.exp(log_t), [10, 20])

    def test_arguments(self):
        with pytest.raises(DomainError):
            geometric_schedule(0.5, 1)
        with pytest.raises(DomainError):
            geometric_schedule(10, 1, ratio=0.5)


class TestSampling(object):
    def test_range(self):
        schedule = theorem_schedule(Potential.power_law(1),
                                    GrowthRate.super_exp(2))
        point = sample_word(schedule, 3, seed=7)
        assert len(point) == 3
        log_s, log_t = schedule.log_window([1, 2, 3])
        for digit, ls, lt in zip(point.exact_prefix, log_s, log_t):
            s, t = math.exp(ls), math.exp(lt)
            assert s - t <= digit <= s + t
        assert 0.7 * math.e ** 2 <= point.exact_prefix[0]

    def test_log_scale_digits(self):
        schedule = geometric_schedule(10, 5)
        point = sample_word(schedule, 50, seed=2)
        assert len(point.exact_prefix) < 50
        log_s, log_t = schedule.log_window(np.arange(1, 51))
        low = log_s + np.log1p(-np.exp(log_t - log_s))
        high = np.logaddexp(log_s, log_t)
        digits = point.log_digit_array()
        assert np.all(digits >= low - 1e-12)
        assert np.all(digits <= high + 1e-12)

    def test_degenerate_window(self):
        point = sample_word(geometric_schedule(10, 0.2, ratio=1), 4, seed=0)
        assert point.exact_prefix == (10, 10, 10, 10)
        point = sample_word(geometric_schedule(7, 0, ratio=1), 2, seed=0)
        assert point.exact_prefix == (7, 7)

    def test_deterministic(self):
        schedule = theorem_schedule(Potential.log_power(2),
                                    GrowthRate.super_exp(2))
        assert sample_word(schedule, 12, 5) == sample_word(schedule, 12, 5)
        assert sample_word(schedule, 12, 5) != sample_word(schedule, 12, 6)

    def test_depth(self):
        with pytest.raises(DomainError):
            sample_word(geometric_schedule(10, 5), 0, seed=0)


class TestEm(object):
    def test_positions(self):
        spec = em_spec(Potential.power_law(1), GrowthRate.poly_exp(0.4), 10,
                       0.1)
        assert spec.exponent == pytest.approx(2.25)
        positions, _ = spec.positions(20)
        assert positions[0] == 1
        assert positions[9] == round(10 ** 2.25)
        assert np.all(np.diff(positions) > 0)

    def test_slow_positions_rejected(self):
        with pytest.raises(ConstructionError) as info:
            em_spec(Potential.power_law(1), GrowthRate.poly_exp(2), 3, 0.5)
        assert info.value.witness >= 2

    def test_needs_poly_exp(self):
        with pytest.raises(DomainError):
            em_spec(Potential.power_law(1), GrowthRate.super_exp(2), 3, 0.1)

    def test_stretched_digits_invert_phi(self):
        potential = Potential.stretched_exp(0.5)
        spec = em_spec(potential, GrowthRate.poly_exp(0.5), 5, 0.2)
        log_u = spec.log_u(5)
        positions, _ = spec.positions(5)
        increment = log_growth(spec.growth, int(positions[0])).log_value
        assert log_u[0] == pytest.approx(
            log_phi_inverse(potential, increment))
        assert np.all(np.diff(log_u) > 0)

    @pytest.mark.parametrize('alpha, eps, verdict', [
        (0.4, 0.1, Verdict.VANISHING),
        (0.6, 0.01, Verdict.DIVERGING)])
    def test_usef(self, alpha, eps, verdict):
        spec = em_spec(Potential.power_law(1), GrowthRate.poly_exp(alpha), 10,
                       eps)
        diagnostic = usef_diagnostic(spec, 200)
        assert diagnostic.ratios.shape == (200,)
        assert diagnostic.verdict == verdict

    def test_usef_short(self):
        spec = em_spec(Potential.power_law(1), GrowthRate.poly_exp(0.4), 10,
                       0.1)
        diagnostic = usef_diagnostic(spec, 2)
        assert len(diagnostic.ratios) == 2
        assert diagnostic.verdict == Verdict.INCONCLUSIVE

    def test_sandwich(self):
        power = Potential.power_law(1)
        growth = GrowthRate.poly_exp(0.4)
        spec = em_spec(power, growth, 10, 0.1)
        positions, _ = spec.positions(20)
        point = sample_em_point(spec, 20, seed=4)
        assert len(point) == positions[-1]
        profile = convergence_profile(power, growth, point, len(point))
        at_positions = profile.deviations[positions - 1]
        slack = np.log1p(positions * 10.0 / np.exp(positions ** 0.4))
        assert np.all(at_positions >= -1e-9)
        assert np.all(at_positions <= slack + 1e-9)


class TestConvergence(object):
    def test_exact_increments(self):
        potential = Potential.power_law(2)
        growth = GrowthRate.poly_exp(0.5)
        log_increments = [log_growth(growth, 1).log_value] + [
            growth_increment_log(growth, n).log_value for n in range(2, 21)]
        log_digits = tuple(float(log_phi_inverse(potential, v))
                           for v in log_increments)
        point = SamplePoint(log_digits, (), 0)
        profile = convergence_profile(potential, growth, point, 20)
        assert profile.scale == Scale.LOG
        np.testing.assert_allclose(profile.deviations, 0.0, atol=1e-9)

    def test_bounded_digits_leave(self):
        point = SamplePoint((math.log(2),) * 12, (2,) * 12, 0)
        profile = convergence_profile(Potential.power_law(1),
                                      GrowthRate.poly_exp(1), point, 12)
        n = np.arange(1, 13)
        np.testing.assert_allclose(profile.deviations, np.log(2 * n) - n)

    @pytest.mark.parametrize('seed', range(5))
    def test_t1_ii_lower_point(self, seed):
        power, growth = Potential.power_law(1), GrowthRate.super_exp(2)
        schedule = theorem_schedule(power, growth,
                                    epsilon_policy=EpsilonPolicy.vanishing())
        point = sample_word(schedule, 30, seed=seed)
        profile = convergence_profile(power, growth, point, 30)
        assert profile.scale == Scale.LOG
        assert not profile.approximate
        n = np.arange(21, 31)
        envelope = -np.log1p(-1.0 / n ** 2)
        assert np.all(np.abs(profile.deviations[20:]) <= envelope + 1e-6)

    def test_depth_check(self):
        point = SamplePoint((0.0,), (1,), 0)
        with pytest.raises(DomainError):
            convergence_profile(Potential.power_law(1),
                                GrowthRate.poly_exp(1), point, 2)


class TestT4Window(object):
    def test_example(self):
        window = t4_window(Potential.stretched_exp(1), GrowthRate.poly_exp(1),
                           5, 0.1)
        assert window.lower == pytest.approx(5 + math.log(0.8))
        assert window.upper == pytest.approx(5 + math.log(1.1))
        assert window.count == 1

    @pytest.mark.parametrize('c, alpha, n, eps', [
        (1, 1, 5, 0.001), (2, 1.5, 4, 0.05)])
    def test_at_most_one(self, c, alpha, n, eps):
        assert t4_window_count(Potential.stretched_exp(c),
                               GrowthRate.poly_exp(alpha), n, eps) <= 1

    def test_hypotheses(self):
        with pytest.raises(DomainError):
            t4_window(Potential.stretched_exp(0.5), GrowthRate.poly_exp(1),
                      5, 0.1)
        with pytest.raises(DomainError):
            t4_window(Potential.stretched_exp(1), GrowthRate.poly_exp(1),
                      5, 0.3)
