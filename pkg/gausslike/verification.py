# -*- coding: utf-8 -*-
"""
Property suites run by `gausslike verify <suite>`. Each suite returns a
SuiteReport whose rows become the report CSV; a failed property is a row
with verdict FAIL, never an exception.
"""
import dataclasses
import itertools
import logging
import math
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence
import warnings

import numpy as np

from . import ENUMERATION_CAP
from .counting import (
    TupleConstraint, g_bound, g_sum, ghat_bound, ghat_sum, zeta_truncated)
from .covering import (
    covering_log_sum, dimension_root, local_dimension_profile,
    digit_window, log_power_sum, product_G_diagnostic)
from .dim_formulas import (
    closed_form_dimension, lemA_liminf, moran_dimension)
from .enums import CoverMethod, RegimeTag, ScheduleCase, Verdict
from .models.ifs_core import IfsSystem, check_system_axioms
from .models.potentials import (
    GrowthRate, Potential, growth_increment_log, log_growth, log_phi,
    log_phi_inverse)
from .schedules import (
    EpsilonPolicy, convergence_profile, em_spec, geometric_schedule,
    sample_word, t4_window_count, theorem_schedule, usef_diagnostic)
from .warning import (
    ConfigError, EnumerationSizeError, PreAsymptoticWarning,
    WindowUndefinedError)


logger = logging.getLogger(__name__)

CHECK_COLUMNS = ('suite', 'check', 'verdict', 'value', 'expected', 'detail')
GRID_COLUMNS = ('m', 'n', 'a_or_b', 'eps', 'd', 's', 'sum', 'bound', 'valid',
                'pass')


@dataclasses.dataclass(frozen=True)
class CheckResult(object):
    suite: str
    check: str
    passed: bool
    value: Optional[float] = None
    expected: Optional[float] = None
    detail: str = ''

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.passed else Verdict.FAIL

    def as_row(self) -> Dict[str, Any]:
        return {'suite': self.suite, 'check': self.check,
                'verdict': self.verdict, 'value': self.value,
                'expected': self.expected, 'detail': self.detail}


class SuiteReport(NamedTuple):
    suite: str
    columns: Sequence[str]
    rows: List[Dict[str, Any]]
    passed: bool

    @classmethod
    def from_checks(cls, suite: str,
                    checks: Sequence[CheckResult]) -> 'SuiteReport':
        return cls(suite, CHECK_COLUMNS, [c.as_row() for c in checks],
                   all(c.passed for c in checks))

    @property
    def failures(self) -> int:
        if self.columns == GRID_COLUMNS:
            return sum(1 for row in self.rows if not row['pass'])
        return sum(1 for row in self.rows if row['verdict'] != Verdict.PASS)


def _close(value: float, expected: float, rel: float = 1e-12,
           abs_tol: float = 1e-12) -> bool:
    return math.isclose(value, expected, rel_tol=rel, abs_tol=abs_tol)


def verify_potentials() -> SuiteReport:
    suite = 'potentials'
    checks = []
    value = float(log_phi(Potential.power_law(2), math.log(3)))
    checks.append(CheckResult(suite, 'log phi power:2 at 3',
                              _close(value, 2 * math.log(3)), value,
                              2 * math.log(3)))
    log_j = np.log(np.array([2.0, 10.0, 1e6]))
    for potential in (Potential.power_law(1.5), Potential.log_power(2),
                      Potential.stretched_exp(0.5)):
        back = log_phi_inverse(potential, log_phi(potential, log_j))
        error = float(np.max(np.abs(back - log_j)))
        checks.append(CheckResult(suite, 'inverse {}'.format(potential),
                                  error <= 1e-9, error, 0.0))
    growth = GrowthRate.poly_exp(0.5)
    value = growth_increment_log(growth, 100).log_value
    expected = 10 + math.log(-math.expm1(math.sqrt(99) - 10))
    checks.append(CheckResult(suite, 'increment polyexp:0.5 at 100',
                              _close(value, expected, 1e-10), value,
                              expected))
    far = log_growth(GrowthRate.double_exp(2), 10 ** 6)
    checks.append(CheckResult(suite, 'doubleexp:2 at 1e6 finite',
                              math.isfinite(far.log_value), far.log_value,
                              detail=far.scale.name))
    checks.extend(_zeta_checks(suite))
    return SuiteReport.from_checks(suite, checks)


def verify_regimes(d_values: Sequence[float] = (1.5, 2.0, 3.0)
                   ) -> SuiteReport:
    suite = 'regimes'
    checks = []
    power = Potential.power_law(1)
    cases = [
        (power, GrowthRate.super_exp(2), 2.0, 1.0 / 3.0),
        (Potential.stretched_exp(0.5), GrowthRate.double_exp(2), 2.0,
         1.0 / 7.0),
        (power, GrowthRate.poly_exp(0.8), 2.0, 0.5),
        (Potential.log_power(2), GrowthRate.poly_exp(0.8), 2.0, 0.5),
        (Potential.stretched_exp(1.5), GrowthRate.poly_exp(1.0), 2.0, 0.0),
        (Potential.stretched_exp(0.5), GrowthRate.poly_exp(1.3), 2.0, 0.25)]
    for potential, growth, d, expected in cases:
        result = closed_form_dimension(potential, growth, d)
        checks.append(CheckResult(
            suite, '{} {} d={:g}'.format(potential, growth, d),
            result.value is not None and _close(result.value, expected),
            result.value, expected, result.formula_id))
    for potential, growth in ((power, GrowthRate.poly_exp(0.3)),
                              (Potential.log_power(2),
                               GrowthRate.poly_exp(0.5))):
        result = closed_form_dimension(potential, growth, 2.0)
        checks.append(CheckResult(
            suite, '{} {} full'.format(potential, growth),
            result.value == 1.0 and result.requires_distortion,
            result.value, 1.0, result.formula_id))
    critical = closed_form_dimension(power, GrowthRate.poly_exp(0.5), 2.0)
    checks.append(CheckResult(
        suite, 'critical alpha = 1/2', critical.value is None and
        critical.regime.tag == RegimeTag.CRITICAL,
        detail=critical.regime.label))
    beta = 1.0 + 1e-6
    for d in d_values:
        value = closed_form_dimension(power, GrowthRate.super_exp(beta),
                                      d).value
        checks.append(CheckResult(
            suite, 'beta -> 1 continuity d={:g}'.format(d),
            abs(value - 1.0 / d) <= 1e-5, value, 1.0 / d))
        value = closed_form_dimension(Potential.log_power(2),
                                      GrowthRate.super_exp(beta), d).value
        checks.append(CheckResult(
            suite, 'log-power beta -> 1 continuity d={:g}'.format(d),
            abs(value - 1.0 / d) <= 1e-5, value, 1.0 / d))
        value = closed_form_dimension(Potential.stretched_exp(0.5),
                                      GrowthRate.double_exp(beta), d).value
        checks.append(CheckResult(
            suite, 'gamma -> 1 continuity d={:g}'.format(d),
            abs(value - 0.5 / d) <= 1e-5, value, 0.5 / d))
    return SuiteReport.from_checks(suite, checks)


def verify_axioms(systems: Optional[Sequence[IfsSystem]] = None,
                  moran_range: int = 50) -> SuiteReport:
    suite = 'axioms'
    if systems is None:
        systems = (IfsSystem.affine(2.0), IfsSystem.mirrored_gauss())
    checks = []
    for system in systems:
        report = check_system_axioms(system)
        name = system.kind.name.lower()
        for check in report.checks:
            checks.append(CheckResult(
                suite, '{} axiom {}'.format(name, check.axiom),
                check.verdict == Verdict.PASS,
                detail=check.witness or check.detail))
        expected = ((1.0 / system.zeta_d, 1.0 / system.zeta_d)
                    if system.is_affine else (0.25, 1.0))
        checks.append(CheckResult(
            suite, '{} K1'.format(name), _close(report.k1, expected[0]),
            report.k1, expected[0]))
        checks.append(CheckResult(
            suite, '{} K2'.format(name), _close(report.k2, expected[1]),
            report.k2, expected[1]))
    affine = IfsSystem.affine(2.0)
    roots = np.array([moran_dimension(affine, M).root
                      for M in range(2, moran_range + 1)])
    checks.append(CheckResult(
        suite, 's(M) increasing on 2..{}'.format(moran_range),
        bool(np.all(np.diff(roots) > 0)), float(roots[-1])))
    checks.append(CheckResult(
        suite, 's({}) >= 0.9'.format(moran_range), roots[-1] >= 0.9,
        float(roots[-1]), 0.9))
    return SuiteReport.from_checks(suite, checks)


class _GridPoint(NamedTuple):
    shape: Potential
    m: float
    n: int
    eps: float
    d: float
    s: float


def counting_grid(m_values: Sequence[float] = (50, 100, 200, 500, 1000,
                                               2000),
                  n_values: Sequence[int] = (2, 3, 4),
                  eps_values: Sequence[float] = (0.15, 0.25, 0.32),
                  s_values: Sequence[float] = (0.75, 1.0),
                  d: float = 2.0,
                  cap: int = ENUMERATION_CAP) -> List[Dict[str, Any]]:
    """
    g_sum against g_bound (a in {1, 2}) and ghat_sum against ghat_bound
    (b in {1.5, 2}) on the product grid. Only points whose eps-window is
    valid are enumerated; the rest are reported with an empty sum.
    """
    shapes = [Potential.power_law(1), Potential.power_law(2),
              Potential.log_power(1.5), Potential.log_power(2)]
    rows = []
    for shape, m, n, eps, s in itertools.product(
            shapes, m_values, n_values, eps_values, s_values):
        rows.append(_grid_row(_GridPoint(shape, float(m), int(n), eps, d, s),
                              cap))
    return rows


def _grid_row(point: _GridPoint, cap: int) -> Dict[str, Any]:
    constraint = TupleConstraint(point.m, point.n, point.shape, point.eps)
    power = point.shape.kind == Potential.power_law(1).kind
    row = {'m': point.m, 'n': point.n, 'a_or_b': point.shape.parameter,
           'eps': point.eps, 'd': point.d, 's': point.s, 'sum': None,
           'bound': None, 'valid': False, 'pass': True}
    try:
        check = (g_bound if power else ghat_bound)(constraint, point.d,
                                                   point.s)
    except WindowUndefinedError:
        return row
    row['bound'] = check.value
    row['valid'] = check.verdict == Verdict.VALID
    if not row['valid']:
        return row
    try:
        total = (g_sum if power else ghat_sum)(constraint, point.d, point.s,
                                               cap)
    except EnumerationSizeError as error:
        logger.warning('%s: %s', constraint, error)
        row['pass'] = False
        return row
    row['sum'] = total
    row['pass'] = total <= check.value
    return row


def verify_counting(cap: int = ENUMERATION_CAP, **grid) -> SuiteReport:
    rows = counting_grid(cap=cap, **grid)
    valid = sum(1 for row in rows if row['valid'])
    logger.info('counting grid: %d points, %d with a valid window',
                len(rows), valid)
    return SuiteReport('counting', GRID_COLUMNS, rows,
                       all(row['pass'] for row in rows))


def _zeta_checks(suite: str) -> List[CheckResult]:
    checks = []
    for s, expected in ((2.0, math.pi ** 2 / 6), (4.0, math.pi ** 4 / 90)):
        zeta = zeta_truncated(s, 1e-10)
        checks.append(CheckResult(
            suite, 'zeta({:g}) certified'.format(s),
            abs(zeta.value - expected) <= zeta.error, zeta.value, expected,
            'error bound {:.3g}'.format(zeta.error)))
    return checks


class LemmaCase(NamedTuple):
    case: ScheduleCase
    potential: Potential
    growth: GrowthRate
    n_max: int
    tolerance: float
    # fixed window proportion eps
    eps: float = 0.1


_STRETCHED = Potential.stretched_exp(0.5)
# float spacing of log s_n near 2^30
_ENVELOPE_SLACK = 1e-6

# polynomially growing windows converge like a power of 1/log n; the
# stretched cases take eps = c/3
LEMMA_CASES = (
    LemmaCase(ScheduleCase.T1_II, Potential.power_law(1),
              GrowthRate.super_exp(2), 200, 0.02),
    LemmaCase(ScheduleCase.T1_I2B, Potential.power_law(1),
              GrowthRate.poly_exp(1.3), 200, 0.02),
    LemmaCase(ScheduleCase.T2_II, Potential.log_power(2),
              GrowthRate.super_exp(2), 200, 0.02),
    LemmaCase(ScheduleCase.T2_I2B, Potential.log_power(2),
              GrowthRate.poly_exp(1.3), 10 ** 5, 0.02),
    LemmaCase(ScheduleCase.T3_I2, _STRETCHED, GrowthRate.poly_exp(1.3), 200,
              0.02, _STRETCHED.parameter / 3),
    LemmaCase(ScheduleCase.T3_II, _STRETCHED, GrowthRate.super_exp(2), 200,
              0.02, _STRETCHED.parameter / 3),
    LemmaCase(ScheduleCase.T3_III, _STRETCHED, GrowthRate.double_exp(2), 200,
              0.02, _STRETCHED.parameter / 3))


def lemma_check(case: LemmaCase, d: float = 2.0) -> CheckResult:
    schedule = theorem_schedule(case.potential, case.growth, case.case,
                                EpsilonPolicy.fixed(case.eps))
    estimate = lemA_liminf(schedule, d, case.n_max).estimate
    expected = closed_form_dimension(case.potential, case.growth, d).value
    gap = abs(estimate - expected) / expected
    return CheckResult(
        'lemA', '{} {} {} n_max={} eps={:g}'.format(
            case.case.name, case.potential, case.growth, case.n_max,
            case.eps),
        gap <= case.tolerance, estimate, expected,
        'relative gap {:.3g}'.format(gap))


def verify_lemA(cases: Sequence[LemmaCase] = LEMMA_CASES,
                d: float = 2.0) -> SuiteReport:
    return SuiteReport.from_checks('lemA', [lemma_check(case, d)
                                            for case in cases])


def verify_schedules(seed: int = 0) -> SuiteReport:
    suite = 'schedules'
    checks = []
    power = Potential.power_law(1)
    lower = theorem_schedule(power, GrowthRate.super_exp(2),
                             ScheduleCase.T1_II, EpsilonPolicy.vanishing())
    indices = np.arange(1, 31)
    # the digit lies within t_n = eps_n s_n of s_n = Phi(n) - Phi(n-1)
    envelope = -np.log1p(-np.exp(lower.epsilon_policy.log_eps(indices)))
    excess = -np.inf
    for offset in range(5):
        point = sample_word(lower, 30, seed + offset)
        profile = convergence_profile(power, GrowthRate.super_exp(2), point,
                                      30)
        excess = max(excess, float(np.max(
            np.abs(profile.deviations[20:]) - envelope[20:])))
    checks.append(CheckResult(
        suite, 'T1-II sampled |delta_n| <= -log(1 - eps_n) for n=21..30',
        excess <= _ENVELOPE_SLACK, excess, 0.0,
        'five seeds from {}'.format(seed)))
    point = sample_word(lower, 30, seed)
    checks.append(CheckResult(
        suite, 'sampling deterministic',
        sample_word(lower, 30, seed) == point))
    for alpha, eps, expected in ((0.4, 0.1, Verdict.VANISHING),
                                 (0.6, 0.01, Verdict.DIVERGING)):
        diagnostic = usef_diagnostic(
            em_spec(power, GrowthRate.poly_exp(alpha), 10, eps), 200)
        checks.append(CheckResult(
            suite, 'usef alpha={:g}'.format(alpha),
            diagnostic.verdict == expected, diagnostic.slope,
            detail=diagnostic.verdict.name))
    worst = max(
        t4_window_count(Potential.stretched_exp(c), GrowthRate.poly_exp(a), n,
                        eps)
        for c, a, n, eps in itertools.product(
            (1.0, 1.5, 2.0), (1.0, 1.5), range(2, 41), (0.01, 0.05, 0.1)))
    checks.append(CheckResult(suite, 'T4 window holds at most one digit',
                              worst <= 1, float(worst), 1.0))
    upper = theorem_schedule(power, GrowthRate.super_exp(2))
    proportion = upper.proportion(40)
    checks.append(CheckResult(
        suite, 'fixed-eps proportion below 1',
        bool(np.all(proportion < 1)), float(proportion.max())))
    return SuiteReport.from_checks(suite, checks)


def verify_covering() -> SuiteReport:
    suite = 'covering'
    checks = []
    affine = IfsSystem.affine(2.0)
    benchmark = geometric_schedule(10.0, 5.0)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', PreAsymptoticWarning)
        trace = dimension_root(affine, benchmark, 40)
        checks.append(CheckResult(
            suite, 'geometric benchmark root at depth 40',
            abs(trace.root - 0.5) <= 0.02, trace.root, 0.5))
        t1 = theorem_schedule(Potential.power_law(1),
                              GrowthRate.super_exp(2))
        trace = dimension_root(affine, t1, 25)
        checks.append(CheckResult(
            suite, 'T1-II root at depth 25',
            abs(trace.root - 1.0 / 3.0) <= 0.03, trace.root, 1.0 / 3.0))
    values = [covering_log_sum(affine, benchmark, 10, s).log_sum
              for s in np.linspace(0.1, 1.5, 15)]
    checks.append(CheckResult(suite, 'log-sum decreasing in s',
                              bool(np.all(np.diff(values) < 0))))
    window = digit_window(math.log(999000.0), math.log(900.0))
    exact, _ = log_power_sum(window, 1.2)
    integral, method = log_power_sum(window._replace(
        low=None, high=None, log_low=math.log(window.low - 0.5),
        log_high=math.log(window.high + 0.5)), 1.2)
    relative = abs(math.expm1(integral - exact))
    checks.append(CheckResult(
        suite, 'exact and integral inner sums near 1e6', relative <= 1e-6
        and method == CoverMethod.INTEGRAL, relative, 0.0))
    profile = local_dimension_profile(affine, benchmark, 1, 30)
    checks.append(CheckResult(
        suite, 'local dimension at depth 30',
        abs(profile.slopes[-1] - 0.5) <= 0.05, float(profile.slopes[-1]),
        0.5))
    diagnostic = product_G_diagnostic(1.0 / 3.0, 200, 1.0, 2.0, 0.6, 0.8)
    checks.append(CheckResult(
        suite, 'product cover decays', diagnostic.verdict == Verdict.DECAYS,
        float(diagnostic.log_bounds[-1]), detail=diagnostic.verdict.name))
    gauss = IfsSystem.mirrored_gauss()
    for depth, s in ((8, 0.7), (12, 0.4), (20, 1.2)):
        affine_value = covering_log_sum(affine, benchmark, depth, s).log_sum
        report = covering_log_sum(gauss, benchmark, depth, s)
        lower, upper = report.band(gauss.distortion_constants)
        raw_lower, raw_upper = report.bounds
        checks.append(CheckResult(
            suite, 'affine log-sum in mirrored band n={} s={}'.format(
                depth, s),
            lower <= raw_lower <= raw_upper <= upper and
            lower <= affine_value <= upper, affine_value,
            detail='band [{:.6g}, {:.6g}]'.format(lower, upper)))
    return SuiteReport.from_checks(suite, checks)


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    'axioms': verify_axioms,
    'counting': verify_counting,
    'covering': verify_covering,
    'lemA': verify_lemA,
    'potentials': verify_potentials,
    'regimes': verify_regimes,
    'schedules': verify_schedules}


def run_suite(name: str, **options) -> SuiteReport:
    """
    Raises
    ------------
    ConfigError
        Unknown suite name.
    """
    if name not in SUITES:
        raise ConfigError('Unknown suite "{}"; choose from {}.'.format(
            name, ', '.join(sorted(SUITES))))
    report = SUITES[name](**options)
    logger.info('suite %s: %d rows, %s', name, len(report.rows),
                'passed' if report.passed else 'FAILED')
    return report
