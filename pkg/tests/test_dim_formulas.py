# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest
from scipy import optimize

from gausslike.dim_formulas import (
    classify_regime, closed_form_dimension, lemA_liminf, lemdim1_lower_bound,
    moran_dimension, perturbed_dimension)
from gausslike.enums import RegimeTag
from gausslike.models.ifs_core import IfsSystem
from gausslike.models.potentials import GrowthRate, Potential
from gausslike.schedules import (
    DigitSchedule, EpsilonPolicy, geometric_schedule, theorem_schedule)
from gausslike.warning import DomainError


power, logpower, stretched = (Potential.power_law, Potential.log_power,
                              Potential.stretched_exp)
polyexp, superexp, doubleexp = (GrowthRate.poly_exp, GrowthRate.super_exp,
                                GrowthRate.double_exp)


class TestClassify(object):
    @pytest.mark.parametrize('potential, growth, tag', [
        (power(3), polyexp(0.5), RegimeTag.CRITICAL),
        (stretched(2), superexp(2), RegimeTag.UNCOVERED),
        (stretched(0.5), doubleexp(3), RegimeTag.T3_III),
        (power(1), polyexp(0.3), RegimeTag.T1_I1),
        (logpower(2), polyexp(0.5), RegimeTag.T2_I1),
        (logpower(2), polyexp(2 / 3), RegimeTag.CRITICAL),
        (stretched(0.5), polyexp(1), RegimeTag.CRITICAL),
        (stretched(1), polyexp(1), RegimeTag.T4_I2),
        (stretched(1.5), polyexp(0.9), RegimeTag.T4_I1)])
    def test_tags(self, potential, growth, tag):
        assert classify_regime(potential, growth).tag == tag

    def test_subcases(self):
        assert classify_regime(power(1), polyexp(0.8)).label == 'T1-I2a'
        assert classify_regime(logpower(2), polyexp(1.3)).label == 'T2-I2b'
        assert classify_regime(stretched(0.5), polyexp(2)).subcase is None


class TestClosedForm(object):
    @pytest.mark.parametrize('potential, growth, value', [
        (power(1), superexp(2), 1 / 3),
        (stretched(0.5), doubleexp(2), 1 / 7),
        (logpower(2), superexp(8), 0.261204),
        (power(2), polyexp(0.8), 0.5),
        (stretched(0.25), polyexp(3), 0.375),
        (stretched(2), polyexp(1), 0.0)])
    def test_values(self, potential, growth, value):
        result = closed_form_dimension(potential, growth, 2.0)
        assert result.value == pytest.approx(value, abs=1e-6)
        assert not result.requires_distortion

    def test_full_dimension(self):
        result = closed_form_dimension(power(1), polyexp(0.3), 2.0)
        assert result.value == 1.0
        assert result.requires_distortion

    def test_critical_has_no_value(self):
        result = closed_form_dimension(power(1), polyexp(0.5), 2.0)
        assert result.value is None
        assert result.formula_id == 'critical'

    def test_d_range(self):
        with pytest.raises(DomainError):
            closed_form_dimension(power(1), superexp(2), 1.0)

    @pytest.mark.parametrize('potential, growth, limit', [
        (power(1), superexp(1 + 1e-6), 0.5),
        (logpower(2), superexp(1 + 1e-6), 0.5),
        (stretched(0.5), doubleexp(1 + 1e-6), 0.25)])
    def test_boundary_continuity(self, potential, growth, limit):
        value = closed_form_dimension(potential, growth, 2.0).value
        assert value == pytest.approx(limit, abs=1e-5)

    def test_monotone(self):
        values = [closed_form_dimension(power(1), superexp(2), d).value
                  for d in (1.5, 2, 3, 5)]
        assert np.all(np.diff(values) < 0)
        values = [closed_form_dimension(stretched(0.5), doubleexp(g), 2).value
                  for g in (1.5, 2, 3)]
        assert np.all(np.diff(values) < 0)
        values = [closed_form_dimension(stretched(c), superexp(2), 2).value
                  for c in (0.2, 0.5, 0.8)]
        assert np.all(np.diff(values) < 0)

    def test_range(self):
        for potential in (power(1), power(3), logpower(1.5),
                          stretched(0.5), stretched(1.5)):
            for growth in (polyexp(0.3), polyexp(1.5), superexp(1.5),
                           doubleexp(2)):
                value = closed_form_dimension(potential, growth, 2.5).value
                assert value is None or 0 <= value <= 1

    def test_perturbed(self):
        result = perturbed_dimension(power(1), superexp(2), 2.0, 0.1)
        assert result.lower < 1 / 3 < result.upper
        with pytest.raises(DomainError):
            perturbed_dimension(power(1), superexp(2), 1.5, 0.6)


class TestLiminf(object):
    def test_geometric_closed_form(self):
        estimate = lemA_liminf(geometric_schedule(1, 0.5), 2.0, 200)
        n = np.arange(1, 201)
        expected = n * (n - 1) / 2 / (n ** 2 + 2 * n + 2)
        np.testing.assert_allclose(estimate.partials, expected, rtol=1e-9)
        assert estimate.last == pytest.approx(0.5, abs=0.01)

    def test_t1_ii(self):
        schedule = theorem_schedule(power(1), superexp(2),
                                    epsilon_policy=EpsilonPolicy.fixed(0.1))
        estimate = lemA_liminf(schedule, 2.0, 200).estimate
        assert estimate == pytest.approx(1 / 3, rel=0.02)

    def test_unit_windows(self):
        schedule = DigitSchedule(lambda n: n, lambda n: 0.0 * n)
        estimate = lemA_liminf(schedule, 2.0, 20)
        np.testing.assert_array_equal(estimate.partials, 0.0)

    def test_small_windows_in_denominator(self):
        # t_n < 1 on even n
        schedule = DigitSchedule(lambda n: 2.0 * n,
                                 lambda n: np.where(n % 2 == 1, n, -n))
        estimate = lemA_liminf(schedule, 2.0, 20)
        n = np.arange(1, 22)
        log_t = np.where(n % 2 == 1, n, -n).astype(float)
        numerator = np.cumsum(np.maximum(log_t, 0.0))[:20]
        denominator = 2.0 * np.cumsum(2.0 * n)[1:] - log_t[1:]
        np.testing.assert_allclose(estimate.partials,
                                   numerator / denominator, rtol=1e-12)
        # q_1 = 1 / (2 (2 + 4) + 2)
        assert estimate.partials[0] == pytest.approx(1 / 14)

    def test_arguments(self):
        with pytest.raises(DomainError):
            lemA_liminf(geometric_schedule(1, 0.5), 2.0, 3)
        with pytest.raises(DomainError):
            lemA_liminf(geometric_schedule(1, 0.5), 1.0, 10)


def _two_branch_root():
    p1, p2 = 6 / math.pi ** 2, 6 / math.pi ** 2 / 4
    return optimize.brentq(lambda s: p1 ** s + p2 ** s - 1.0, 0.1, 1.0,
                           xtol=1e-14)


class TestMoran(object):
    def test_two_branches(self):
        result = moran_dimension(IfsSystem.affine(2.0), 2, 1e-10)
        assert result.root == pytest.approx(_two_branch_root(), abs=1e-9)
        assert result.root == pytest.approx(0.669382, abs=1e-6)
        p1, p2 = 6 / math.pi ** 2, 6 / math.pi ** 2 / 4
        assert p1 ** result.root + p2 ** result.root == pytest.approx(1.0)

    def test_single_branch(self):
        with pytest.raises(DomainError):
            moran_dimension(IfsSystem.affine(2.0), 1)

    def test_increasing_to_one(self):
        system = IfsSystem.affine(2.0)
        roots = [moran_dimension(system, M).root
                 for M in (2, 5, 50, 10 ** 4)]
        assert np.all(np.diff(roots) > 0)
        assert roots[-1] >= 0.98

    def test_gauss_brackets(self):
        result = moran_dimension(IfsSystem.mirrored_gauss(), 10)
        assert 0 < result.lower < result.upper <= 1

    def test_lower_bound(self):
        system = IfsSystem.affine(2.0)
        assert lemdim1_lower_bound(system, 2) == pytest.approx(
            2 * _two_branch_root() - 1, abs=1e-9)
        assert lemdim1_lower_bound(system, 10 ** 4) >= 0.96
        # a flat spectrum of branch lengths pushes s(2) below 1/2
        assert lemdim1_lower_bound(IfsSystem.affine(1.1), 2) == 0.0
