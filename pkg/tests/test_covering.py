# -*- coding: utf-8 -*-
import math
import warnings

import numpy as np
import pytest

from gausslike.covering import (
    covering_log_sum, digit_window, dimension_root, local_dimension_profile,
    log_power_sum, product_G_diagnostic, product_ghat_diagnostic,
    product_positions)
from gausslike.dim_formulas import lemA_liminf
from gausslike.enums import CoverKind, CoverMethod, Verdict
from gausslike.models.ifs_core import IfsSystem
from gausslike.models.potentials import GrowthRate, Potential
from gausslike.schedules import geometric_schedule, theorem_schedule
from gausslike.warning import (
    BracketError, DomainError, HypothesisError, PreAsymptoticWarning)
from config import slow


ZETA_2 = math.pi ** 2 / 6


@pytest.fixture
def affine():
    return IfsSystem.affine(2.0)


@pytest.fixture
def benchmark():
    return geometric_schedule(10.0, 5.0)


class TestDigitWindow(object):
    def test_exact(self):
        window = digit_window(math.log(20.3), math.log(5.0))
        assert (window.low, window.high) == (16, 25)
        assert window.log_count == pytest.approx(math.log(10))

    def test_collapse(self):
        window = digit_window(math.log(10.4), math.log(0.2))
        assert (window.low, window.high) == (10, 10)
        assert window.log_count == 0.0

    def test_log_scale(self):
        window = digit_window(100.0, 99.0)
        assert not window.exact
        assert window.log_high == pytest.approx(100 + math.log1p(math.e ** -1))
        assert window.log_count == pytest.approx(
            99 + math.log(2), abs=1e-9)
        narrow = digit_window(100.0, -1.0)
        assert narrow.log_count == 0.0


class TestPowerSum(object):
    def test_exact(self):
        window = digit_window(math.log(20.3), math.log(5.0))
        value, method = log_power_sum(window, 2.0)
        assert method == CoverMethod.EXACT
        assert value == pytest.approx(
            math.log(sum(a ** -2.0 for a in range(16, 26))))

    def test_shift(self):
        window = digit_window(math.log(20.3), math.log(5.0))
        value, _ = log_power_sum(window, 2.0, shift=1)
        assert value == pytest.approx(
            math.log(sum(a ** -2.0 for a in range(17, 27))))

    @pytest.mark.parametrize('exponent', [0.8, 1.0, 1.2])
    def test_integral_near_limit(self, exponent):
        window = digit_window(math.log(999000.0), math.log(900.0))
        exact, method = log_power_sum(window, exponent)
        assert method == CoverMethod.EXACT
        integral, method = log_power_sum(window._replace(
            low=None, high=None, log_low=math.log(window.low - 0.5),
            log_high=math.log(window.high + 0.5)), exponent)
        assert method == CoverMethod.INTEGRAL
        assert abs(math.expm1(integral - exact)) <= 1e-6

    def test_large_window_uses_integral(self):
        window = digit_window(math.log(5e6), math.log(1e6))
        _, method = log_power_sum(window, 1.5)
        assert method == CoverMethod.INTEGRAL


class TestCoveringLogSum(object):
    def test_single_cylinder(self, affine):
        schedule = geometric_schedule(1.0, 0.0, ratio=1.0)
        report = covering_log_sum(affine, schedule, 3, 1.0)
        assert report.log_sum == pytest.approx(-1.4931, abs=1e-4)
        assert report.method == CoverMethod.EXACT
        assert report.upper_log_sum is None

    def test_direct_summation(self, affine):
        schedule = geometric_schedule(10.5, 1.3)
        report = covering_log_sum(affine, schedule, 5, 0.6)
        expected = 0.0
        for i in range(1, 6):
            s, t = 10.5 * 2 ** i, 1.3 * 2 ** i
            digits = range(math.ceil(s - t), math.floor(s + t) + 1)
            expected += math.log(sum((a ** -2.0 / ZETA_2) ** 0.6
                                     for a in digits))
        assert report.log_sum == pytest.approx(expected, rel=1e-10)

    def test_near_lemA_partial(self, affine):
        schedule = geometric_schedule(10.5, 1.3)
        q5 = lemA_liminf(schedule, 2.0, 5).partials[4]
        report = covering_log_sum(affine, schedule, 5, q5, CoverKind.HULL)
        assert abs(report.log_sum) <= 2.0 * 5

    def test_decreasing_in_s(self, affine, benchmark):
        values = [covering_log_sum(affine, benchmark, 10, s).log_sum
                  for s in np.linspace(0.1, 1.5, 15)]
        assert np.all(np.diff(values) < 0)

    def test_hull_adds_children(self, affine, benchmark):
        cylinder = covering_log_sum(affine, benchmark, 6, 0.5)
        hull = covering_log_sum(affine, benchmark, 6, 0.5, CoverKind.HULL)
        assert hull.log_sum < cylinder.log_sum

    def test_mirrored_bounds(self, affine, benchmark):
        gauss = IfsSystem.mirrored_gauss()
        report = covering_log_sum(gauss, benchmark, 8, 0.7)
        lower, upper = report.bounds
        assert lower < upper
        affine_value = covering_log_sum(affine, benchmark, 8, 0.7).log_sum
        # lambda_a = a^-2 is the affine length without the 1/zeta(2) factor
        assert upper == pytest.approx(
            affine_value + 8 * 0.7 * math.log(ZETA_2), rel=1e-12)

    @pytest.mark.parametrize('kind', [CoverKind.CYLINDER, CoverKind.HULL])
    @pytest.mark.parametrize('depth, s', [(8, 0.7), (12, 0.4), (20, 1.2)])
    def test_affine_in_mirrored_band(self, affine, benchmark, kind, depth,
                                     s):
        gauss = IfsSystem.mirrored_gauss()
        report = covering_log_sum(gauss, benchmark, depth, s, kind)
        lower, upper = report.band(gauss.distortion_constants)
        raw_lower, raw_upper = report.bounds
        assert lower <= raw_lower < raw_upper <= upper
        affine_value = covering_log_sum(affine, benchmark, depth, s,
                                        kind).log_sum
        assert lower <= affine_value <= upper

    def test_affine_below_raw_lower(self, affine, benchmark):
        gauss = IfsSystem.mirrored_gauss()
        raw_lower, _ = covering_log_sum(gauss, benchmark, 8, 0.7).bounds
        affine_value = covering_log_sum(affine, benchmark, 8, 0.7).log_sum
        assert affine_value < raw_lower

    def test_band_needs_mirrored(self, affine, benchmark):
        report = covering_log_sum(affine, benchmark, 4, 0.5)
        with pytest.raises(DomainError):
            report.band(affine.distortion_constants)
        gauss = covering_log_sum(IfsSystem.mirrored_gauss(), benchmark, 4,
                                 0.5)
        with pytest.raises(DomainError):
            gauss.band((1.0, 0.5))

    def test_arguments(self, affine, benchmark):
        with pytest.raises(DomainError):
            covering_log_sum(affine, benchmark, 0, 1.0)
        with pytest.raises(DomainError):
            covering_log_sum(affine, benchmark, 3, 2.5)


class TestDimensionRoot(object):
    @slow
    def test_geometric_benchmark(self, affine, benchmark):
        trace = dimension_root(affine, benchmark, 40, depths=(10, 20, 40))
        assert trace.depths == (10, 20, 40)
        assert abs(trace.root - 0.5) <= 0.02
        assert np.all(np.abs(trace.gaps) < 0.1)
        for f_low, f_high in trace.brackets:
            assert f_low > 0 > f_high

    def test_t1_ii(self, affine):
        schedule = theorem_schedule(Potential.power_law(1),
                                    GrowthRate.super_exp(2))
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', PreAsymptoticWarning)
            trace = dimension_root(affine, schedule, 25)
        assert abs(trace.root - 1 / 3) <= 0.03

    def test_single_digit_windows(self, affine):
        with pytest.raises(BracketError) as info:
            dimension_root(affine, geometric_schedule(10.0, 0.0), 10)
        assert info.value.lower_value < 0


class TestLocalProfile(object):
    def test_slope(self, affine, benchmark):
        profile = local_dimension_profile(affine, benchmark, 1, 30)
        assert profile.slopes.shape == (30,)
        assert not profile.degenerate
        assert abs(profile.slopes[-1] - 0.5) <= 0.05

    def test_deterministic(self, affine, benchmark):
        first = local_dimension_profile(affine, benchmark, 3, 12)
        second = local_dimension_profile(affine, benchmark, 3, 12)
        np.testing.assert_array_equal(first.log_radius, second.log_radius)

    def test_point_mass(self, affine):
        profile = local_dimension_profile(
            affine, geometric_schedule(10.0, 0.0), 0, 8)
        assert profile.degenerate
        assert np.all(np.isnan(profile.slopes))

    def test_mirrored(self, benchmark):
        profile = local_dimension_profile(IfsSystem.mirrored_gauss(),
                                          benchmark, 1, 10)
        assert np.all(np.diff(profile.log_radius) < 0)

    def test_depth(self, affine, benchmark):
        with pytest.raises(DomainError):
            local_dimension_profile(affine, benchmark, 0, 3)


class TestProductCover(object):
    def test_positions(self):
        positions = product_positions(0.8, 10)
        assert positions[0] == 1
        assert positions[1] == 2
        assert np.all(np.diff(positions) >= 1)

    def test_decays(self):
        diagnostic = product_G_diagnostic(1 / 3, 200, 1.0, 2.0, 0.6, 0.8)
        assert diagnostic.first_valid == 1
        assert diagnostic.verdict == Verdict.DECAYS
        assert diagnostic.witness is None

    def test_near_critical_alpha(self):
        diagnostic = product_G_diagnostic(1 / 3, 60, 1.0, 2.0, 0.6, 0.51)
        assert diagnostic.first_valid == 1
        assert diagnostic.verdict == Verdict.GROWS
        assert diagnostic.witness == 3

    def test_hypotheses(self):
        with pytest.raises(DomainError):
            product_G_diagnostic(1 / 3, 40, 1.0, 2.0, 0.45, 0.8)
        with pytest.raises(HypothesisError):
            product_G_diagnostic(1 / 3, 40, 1.0, 2.0, 0.6, 0.5)
        with pytest.raises(HypothesisError):
            product_ghat_diagnostic(1 / 3, 40, 2.0, 2.0, 0.6, 0.6)

    def test_ghat_runs(self):
        diagnostic = product_ghat_diagnostic(1 / 3, 80, 2.0, 2.0, 0.6, 0.9)
        assert diagnostic.log_bounds.shape == (80,)
        assert diagnostic.verdict in (Verdict.DECAYS, Verdict.GROWS)
