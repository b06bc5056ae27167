# -*- coding: utf-8 -*-
"""
Digit schedules: the windows [s_n - t_n, s_n + t_n] defining B(s_n, t_n, N)
for every theorem case, the E_M construction of digits u_k placed at sparse
positions n_k, seeded samplers for both, and the diagnostics that check a
sampled point really has S_n phi / Phi(n) -> 1.
"""
import dataclasses
import logging
import math
from typing import Callable, List, NamedTuple, Optional, Tuple
import warnings

import numpy as np

from . import DEFAULT_EPSILON_RATE, MATERIALIZATION_LIMIT
from .dim_formulas import classify_regime
from .enums import (
    BoundFlavor, GrowthKind, PotentialKind, RegimeTag, Scale, ScheduleCase,
    Verdict)
from .models.potentials import (
    GrowthRate, Potential, growth_difference_log, log_growth, log_phi,
    log_phi_inverse, loglog_phi)
from .utils import LOG_FLOAT_MAX
from .warning import (
    ApproximationWarning, ConstructionError, DomainError, UncoveredCaseError)


logger = logging.getLogger(__name__)

LogFunction = Callable[[np.ndarray], np.ndarray]

_LOG_MATERIALIZATION_LIMIT = math.log(MATERIALIZATION_LIMIT)
# indices scanned when choosing the start index N
_START_PREFIX = 64
# |slope| of log r_k against log k needed for a usef verdict
_SLOPE_THRESHOLD = 0.05


@dataclasses.dataclass(frozen=True)
class EpsilonPolicy(object):
    """
    UPPER flavor: a fixed eps, giving a set that contains E_phi(Phi).
    LOWER flavor: eps_n = n^{-rate}, giving a set inside E_phi(Phi).
    """
    flavor: BoundFlavor
    eps: Optional[float] = None
    rate: Optional[float] = None

    def __post_init__(self) -> None:
        if self.flavor == BoundFlavor.UPPER:
            if self.eps is None or not 0 < self.eps < 1:
                raise DomainError('A fixed eps must lie in (0, 1), got '
                                  '{}.'.format(self.eps))
        elif self.rate is None or not self.rate > 0:
            raise DomainError('eps_n = n^-rate needs rate > 0, got '
                              '{}.'.format(self.rate))

    @classmethod
    def fixed(cls, eps: float) -> 'EpsilonPolicy':
        return cls(BoundFlavor.UPPER, eps=float(eps))

    @classmethod
    def vanishing(cls,
                  rate: float = DEFAULT_EPSILON_RATE) -> 'EpsilonPolicy':
        return cls(BoundFlavor.LOWER, rate=float(rate))

    def log_eps(self, n: np.ndarray) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        if self.flavor == BoundFlavor.UPPER:
            return np.full_like(n, math.log(self.eps))
        return -self.rate * np.log(n)

    @property
    def label(self) -> str:
        if self.flavor == BoundFlavor.UPPER:
            return 'eps={:g}'.format(self.eps)
        return 'eps_n=n^-{:g}'.format(self.rate)


@dataclasses.dataclass(frozen=True)
class DigitSchedule(object):
    """
    Parameters
    ------------
    log_s, log_t : callable
        Vectorized maps from an array of indices n to log s_n and log t_n.

    start_index : int
        N: the window constraint applies from position N on. Earlier
        positions carry the digit 1.

    epsilon_policy : EpsilonPolicy, optional

    case : ScheduleCase, optional
        The theorem case the schedule was built for.

    label : str

    log_ratio : callable, optional
        log(t_n / s_n). Used in place of log t_n - log s_n, which loses the
        eps term once log s_n passes 2^53.
    """
    log_s: LogFunction
    log_t: LogFunction
    start_index: int = 1
    epsilon_policy: Optional[EpsilonPolicy] = None
    case: Optional[ScheduleCase] = None
    label: str = 'custom'
    log_ratio: Optional[LogFunction] = None

    def __post_init__(self) -> None:
        if self.start_index < 1:
            raise DomainError('start_index must be >= 1, got {}.'.format(
                self.start_index))

    def log_window(self, n) -> Tuple[np.ndarray, np.ndarray]:
        """
        (log s_n, log t_n) for the indices n, with the head n < N reported
        as the one-point window {1}: (0, -inf).
        """
        n = np.atleast_1d(np.asarray(n, dtype=np.float64))
        with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
            log_s = np.broadcast_to(self.log_s(n), n.shape).astype(np.float64)
            log_t = np.broadcast_to(self.log_t(n), n.shape).astype(np.float64)
        head = n < self.start_index
        log_s[head] = 0.0
        log_t[head] = -np.inf
        return log_s, log_t

    def log_offset(self, n) -> np.ndarray:
        """
        log(t_n / s_n) for the indices n; -inf on the head n < N.
        """
        n = np.atleast_1d(np.asarray(n, dtype=np.float64))
        if self.log_ratio is None:
            log_s, log_t = self.log_window(n)
            with np.errstate(invalid='ignore'):
                offset = log_t - log_s
        else:
            with np.errstate(over='ignore', invalid='ignore',
                             divide='ignore'):
                offset = np.broadcast_to(self.log_ratio(n),
                                         n.shape).astype(np.float64)
        offset[n < self.start_index] = -np.inf
        return offset

    def proportion(self, n_max: int) -> np.ndarray:
        """
        t_n/s_n for n = N..n_max. The liminf formula needs it bounded
        below 1.
        """
        return np.exp(self.log_offset(np.arange(self.start_index,
                                                n_max + 1)))


def _start_index(log_s: LogFunction, log_ratio: LogFunction,
                 label: str) -> int:
    n = np.arange(1, _START_PREFIX + 1, dtype=np.float64)
    with np.errstate(over='ignore', invalid='ignore'):
        narrow = (np.asarray(log_ratio(n) < 0) &
                  np.isfinite(np.asarray(log_s(n))))
    if not narrow[-1]:
        raise ConstructionError(
            '{}: t_n >= s_n at n = {}; the window is never narrower than its '
            'center.'.format(label, _START_PREFIX), witness=_START_PREFIX)
    wide = np.flatnonzero(~narrow)
    return int(wide[-1]) + 2 if wide.size else 1


def _uncovered(potential: Potential, growth: GrowthRate,
               detail: str) -> UncoveredCaseError:
    return UncoveredCaseError('No schedule for ({}, {}): {}.'.format(
        potential, growth, detail))


def schedule_case(potential: Potential, growth: GrowthRate) -> ScheduleCase:
    """
    The theorem case whose schedule describes (potential, growth).
    """
    regime = classify_regime(potential, growth)
    tag = regime.tag
    if tag == RegimeTag.T1_I2:
        return ScheduleCase.T1_I2A if regime.subcase == 'a' else \
            ScheduleCase.T1_I2B
    if tag == RegimeTag.T2_I2:
        return ScheduleCase.T2_I2A if regime.subcase == 'a' else \
            ScheduleCase.T2_I2B
    direct = {
        RegimeTag.T1_II: ScheduleCase.T1_II,
        RegimeTag.T2_II: ScheduleCase.T2_II,
        RegimeTag.T3_I2: ScheduleCase.T3_I2,
        RegimeTag.T3_II: ScheduleCase.T3_II,
        RegimeTag.T3_III: ScheduleCase.T3_III}
    if tag not in direct:
        raise _uncovered(potential, growth,
                         'regime {} has no window construction'.format(
                             regime.label))
    return direct[tag]


def _case_formulas(case: ScheduleCase, potential: Potential,
                   growth: GrowthRate,
                   policy: EpsilonPolicy) -> Tuple[LogFunction, LogFunction]:
    """
    (log s_n, log t_n/s_n) of one case.
    """
    p = potential.parameter
    g = growth.parameter
    upper = policy.flavor == BoundFlavor.UPPER

    def eps_term(n, divisor):
        # log(3 eps / divisor) for fixed eps, log eps_n otherwise
        if upper:
            return math.log(3.0 * policy.eps / divisor) * np.ones_like(n)
        return policy.log_eps(n)

    if case == ScheduleCase.T1_II:
        def log_s(n):
            return g ** n / p

        def log_ratio(n):
            return eps_term(n, p)
    elif case == ScheduleCase.T1_I2B:
        def log_s(n):
            return n ** g / p

        def log_ratio(n):
            return eps_term(n, p)
    elif case == ScheduleCase.T2_II:
        def log_s(n):
            return g ** (n / p)

        def log_ratio(n):
            return n * (1.0 / p - 1.0) * math.log(g) + eps_term(n, p)
    elif case == ScheduleCase.T2_I2B:
        def log_s(n):
            return n ** (g / p)

        def log_ratio(n):
            return g * (1.0 / p - 1.0) * np.log(n) + eps_term(n, p)
    elif case == ScheduleCase.T3_I2:
        def log_s(n):
            return g / p * np.log(n)

        def log_ratio(n):
            return -g * np.log(n) + eps_term(n, p)
    elif case == ScheduleCase.T3_II:
        def log_s(n):
            return n / p * math.log(g)

        def log_ratio(n):
            return -n * math.log(g) + eps_term(n, p)
    elif case == ScheduleCase.T3_III:
        def log_s(n):
            return g ** n / p

        def log_ratio(n):
            return -g ** n + eps_term(n, p)
    elif case == ScheduleCase.T1_I2A:
        # phi(a_n) ~ alpha n^{alpha-1} e^{n^alpha}, the increment of Phi
        def log_s(n):
            return (n ** g + math.log(g) + (g - 1.0) * np.log(n)) / p

        def log_ratio(n):
            return policy.log_eps(n) - math.log(p)
    else:
        def log_s(n):
            exponent = n ** g + math.log(g) + (g - 1.0) * np.log(n)
            return np.maximum(exponent, 0.0) ** (1.0 / p)

        def log_ratio(n):
            return (math.log(2.0 / p) + policy.log_eps(n) +
                    g * (1.0 / p - 1.0) * np.log(n))
    return log_s, log_ratio


def _offset_log_t(log_s: LogFunction,
                  log_ratio: LogFunction) -> LogFunction:
    def log_t(n):
        return log_s(n) + log_ratio(n)
    return log_t


def theorem_schedule(potential: Potential, growth: GrowthRate,
                     case_tag: Optional[ScheduleCase] = None,
                     epsilon_policy: Optional[EpsilonPolicy] = None
                     ) -> DigitSchedule:
    """
    The window schedule of the theorem case covering (potential, growth).

    With a fixed eps the schedule is the upper-bound one, B(s_n, t_n, N)
    containing E_phi(Phi); with a vanishing eps_n it is the lower-bound one,
    contained in E_phi(Phi). The I-2a cases only have the lower-bound
    schedule. By default I-2a cases use eps_n = n^-2 and every other case a
    fixed eps = 0.1.

    Raises
    ------------
    UncoveredCaseError
        No schedule exists for the pair, the requested case does not match
        the pair, or an upper-bound schedule is requested for an I-2a case.
    ConstructionError
        The window never becomes narrower than its center.
    """
    case = schedule_case(potential, growth)
    if case_tag is not None and case_tag != case:
        raise _uncovered(potential, growth, 'the pair is in case {}, not '
                         '{}'.format(case.name, case_tag.name))
    if epsilon_policy is None:
        epsilon_policy = (EpsilonPolicy.vanishing()
                          if case & ScheduleCase.LOWER_ONLY
                          else EpsilonPolicy.fixed(0.1))
    if (case & ScheduleCase.LOWER_ONLY and
            epsilon_policy.flavor == BoundFlavor.UPPER):
        raise _uncovered(potential, growth,
                         'the {} upper bound is a product cover, see '
                         'covering.product_G_diagnostic'.format(case.name))
    log_s, log_ratio = _case_formulas(case, potential, growth,
                                      epsilon_policy)
    label = '{} {} {} {}'.format(case.name, potential, growth,
                                 epsilon_policy.label)
    start = _start_index(log_s, log_ratio, label)
    logger.debug('%s: start index %d', label, start)
    return DigitSchedule(log_s, _offset_log_t(log_s, log_ratio), start,
                         epsilon_policy, case, label, log_ratio)


def geometric_schedule(s0: float, t0: float,
                       ratio: float = 2.0) -> DigitSchedule:
    """
    s_n = s0 ratio^n and t_n = t0 ratio^n. ratio = 1 gives a constant window
    and t0 = 0 a one-digit window.
    """
    if not s0 >= 1 or t0 < 0 or not ratio >= 1:
        raise DomainError('Need s0 >= 1, t0 >= 0 and ratio >= 1.')
    log_step = math.log(ratio)
    log_s0 = math.log(s0)
    offset = math.log(t0 / s0) if t0 > 0 else -math.inf

    def log_s(n):
        return log_s0 + n * log_step

    def log_ratio(n):
        return np.full_like(n, offset, dtype=np.float64)

    label = 'geometric s0={:g} t0={:g} ratio={:g}'.format(s0, t0, ratio)
    return DigitSchedule(log_s, _offset_log_t(log_s, log_ratio),
                         _start_index(log_s, log_ratio, label), label=label,
                         log_ratio=log_ratio)


@dataclasses.dataclass(frozen=True)
class SamplePoint(object):
    log_digits: Tuple[float, ...]
    # the longest prefix of digits known as exact integers
    exact_prefix: Tuple[int, ...]
    seed: int

    def __len__(self) -> int:
        return len(self.log_digits)

    def log_digit_array(self) -> np.ndarray:
        return np.asarray(self.log_digits, dtype=np.float64)


def _draw_digit(rng: np.random.Generator, log_s: float, log_t: float,
                log_ratio: float) -> Tuple[float, Optional[int]]:
    if np.logaddexp(log_s, log_t) < _LOG_MATERIALIZATION_LIMIT:
        s, t = math.exp(log_s), math.exp(log_t)
        low = max(1, math.ceil(s - t))
        high = math.floor(s + t)
        if low > high:
            digit = max(1, int(round(s)))
        else:
            digit = int(rng.integers(low, high + 1))
        return math.log(digit), digit
    u = rng.uniform(-1.0, 1.0)
    return log_s + math.log1p(u * math.exp(log_ratio)), None


def sample_word(schedule: DigitSchedule, depth: int,
                seed: int) -> SamplePoint:
    """
    One point of B(s_n, t_n, N): digit n uniform on the integers of its
    window while s_n + t_n < 2^40, and log a_n = log(s_n + u t_n) with u
    uniform on [-1, 1] beyond that. A window without integers collapses to
    round(s_n).
    """
    if depth < 1:
        raise DomainError('depth must be >= 1, got {}.'.format(depth))
    rng = np.random.default_rng(seed)
    indices = np.arange(1, depth + 1)
    log_s, log_t = schedule.log_window(indices)
    offsets = schedule.log_offset(indices)
    log_digits: List[float] = []
    exact: List[int] = []
    for n in range(depth):
        log_digit, digit = _draw_digit(rng, log_s[n], log_t[n],
                                        offsets[n])
        log_digits.append(float(log_digit))
        if digit is not None and len(exact) == n:
            exact.append(digit)
    return SamplePoint(tuple(log_digits), tuple(exact), seed)


@dataclasses.dataclass(frozen=True)
class EmSpec(object):
    """
    Digits u_k at positions n_k = round(k^{(1/alpha)(1-eps)}), all other
    digits at most M. Positions are bumped forward where rounding would
    repeat one.
    """
    potential: Potential
    growth: GrowthRate
    M: int
    eps: float

    @property
    def exponent(self) -> float:
        return (1.0 - self.eps) / self.growth.parameter

    def positions(self, k_max: int) -> Tuple[np.ndarray, List[int]]:
        """
        n_1..n_{k_max} and the k whose position was bumped.
        """
        raw = np.floor(np.arange(1, k_max + 1) ** self.exponent + 0.5)
        positions = raw.astype(np.int64)
        bumped = []
        for k in range(1, k_max):
            if positions[k] <= positions[k - 1]:
                positions[k] = positions[k - 1] + 1
                bumped.append(k + 1)
        return positions, bumped

    def log_u(self, k_max: int) -> np.ndarray:
        """
        log u_k = log phi^{-1}(Phi(n_k) - Phi(n_{k-1})) with Phi(n_0) = 0,
        clamped at u_k = 1.
        """
        positions, _ = self.positions(k_max)
        values = np.empty(k_max)
        previous = 0
        for k, n in enumerate(positions):
            increment = growth_difference_log(self.growth, int(n), previous)
            if increment.scale != Scale.LOG:
                raise ConstructionError(
                    'Phi(n_{}) - Phi(n_{}) overflows log scale.'.format(
                        k + 1, k), witness=k + 1)
            values[k] = log_phi_inverse(self.potential,
                                        max(0.0, increment.log_value))
            previous = int(n)
        return values


def em_spec(potential: Potential, growth: GrowthRate, M: int,
            eps: float) -> EmSpec:
    """
    Raises
    ------------
    ConstructionError
        (1/alpha)(1-eps) <= 1, so n_k/k does not tend to infinity. The
        witness is the first k whose rounded position repeats (or 2).
    """
    if growth.kind != GrowthKind.POLY_EXP:
        raise DomainError('E_M schedules need e^(n^alpha) growth, got '
                          '{}.'.format(growth))
    if not 0 < eps < 1:
        raise DomainError('eps must lie in (0, 1), got {}.'.format(eps))
    if M < 1:
        raise DomainError('M must be >= 1, got {}.'.format(M))
    spec = EmSpec(potential, growth, int(M), float(eps))
    if spec.exponent <= 1:
        k = np.arange(1, 10001)
        raw = np.floor(k ** spec.exponent + 0.5)
        repeats = np.flatnonzero(np.diff(raw) == 0)
        witness = int(repeats[0]) + 2 if repeats.size else 2
        raise ConstructionError(
            'n_k = round(k^{:.4g}) does not grow faster than k '
            '(first repeat at k = {}).'.format(spec.exponent, witness),
            witness=witness)
    return spec


class UsefDiagnostic(NamedTuple):
    ratios: np.ndarray
    verdict: Verdict
    # fitted exponent of r_k ~ k^slope over the last half
    slope: Optional[float]


def usef_diagnostic(spec: EmSpec, k_max: int) -> UsefDiagnostic:
    """
    r_k = (1/n_k) sum_{j<=k} log u_j for k = 1..k_max. VANISHING needs r_k
    strictly decreasing over the last half with a fitted log-log slope of at
    most -0.05, DIVERGING the mirror image; anything else, or k_max < 4, is
    INCONCLUSIVE.
    """
    if k_max < 2:
        raise DomainError('k_max must be >= 2, got {}.'.format(k_max))
    positions, bumped = spec.positions(k_max)
    if bumped:
        logger.info('E_M positions bumped at k = %s', bumped[:10])
    ratios = np.cumsum(spec.log_u(k_max)) / positions
    if k_max < 4:
        return UsefDiagnostic(ratios, Verdict.INCONCLUSIVE, None)
    k = np.arange(1, k_max + 1)
    tail = slice(k_max // 2 - 1, k_max)
    steps = np.diff(ratios[tail])
    if np.all(ratios[tail] <= 0):
        return UsefDiagnostic(ratios, Verdict.VANISHING, None)
    if np.any(ratios[tail] <= 0):
        return UsefDiagnostic(ratios, Verdict.INCONCLUSIVE, None)
    slope = float(np.polyfit(np.log(k[tail]), np.log(ratios[tail]), 1)[0])
    if np.all(steps < 0) and slope <= -_SLOPE_THRESHOLD:
        verdict = Verdict.VANISHING
    elif np.all(steps > 0) and slope >= _SLOPE_THRESHOLD:
        verdict = Verdict.DIVERGING
    else:
        verdict = Verdict.INCONCLUSIVE
    return UsefDiagnostic(ratios, verdict, slope)


def sample_em_point(spec: EmSpec, k_max: int, seed: int) -> SamplePoint:
    """
    A point with the real digits u_k at positions n_k and digits drawn
    uniformly from 1..M elsewhere, up to position n_{k_max}.
    """
    positions, _ = spec.positions(k_max)
    log_u = spec.log_u(k_max)
    rng = np.random.default_rng(seed)
    length = int(positions[-1])
    free = rng.integers(1, spec.M + 1, size=length)
    log_digits = np.log(free.astype(np.float64))
    log_digits[positions - 1] = log_u
    exact: List[int] = []
    sparse = dict(zip(positions.tolist(), log_u.tolist()))
    for n in range(1, length + 1):
        if n in sparse:
            value = math.exp(sparse[n])
            if sparse[n] >= _LOG_MATERIALIZATION_LIMIT or \
                    value != round(value):
                break
            exact.append(int(round(value)))
        else:
            exact.append(int(free[n - 1]))
    return SamplePoint(tuple(log_digits.tolist()), tuple(exact), seed)


class ConvergenceProfile(NamedTuple):
    # log S_n phi - log Phi(n), or the same at log log scale
    deviations: np.ndarray
    scale: Scale
    # max |deviation| over the last quarter
    tail_max: float

    @property
    def approximate(self) -> bool:
        return self.scale != Scale.LOG


def convergence_profile(potential: Potential, growth: GrowthRate,
                        point: SamplePoint, depth: int) -> ConvergenceProfile:
    """
    delta_n = log S_n phi - log Phi(n) for n = 1..depth. If phi of a digit
    or Phi(n) does not fit at log scale, the deviations are taken between
    log log values instead (where log log S_n phi is the largest log log phi
    of the digits) and flagged.
    """
    if depth < 1 or len(point) < depth:
        raise DomainError('The point has {} digits, {} requested.'.format(
            len(point), depth))
    log_digits = point.log_digit_array()[:depth]
    growth_values = [log_growth(growth, n) for n in range(1, depth + 1)]
    loglog_terms = loglog_phi(potential, log_digits)
    fits = (np.all(loglog_terms < LOG_FLOAT_MAX) and
            all(v.scale == Scale.LOG for v in growth_values))
    if fits:
        log_sums = np.logaddexp.accumulate(log_phi(potential, log_digits))
        deviations = log_sums - np.array([v.log_value for v in growth_values])
        scale = Scale.LOG
    else:
        warnings.warn('{}: convergence measured at log log scale'.format(
            growth), ApproximationWarning)
        loglog_sums = np.maximum.accumulate(loglog_terms)
        deviations = loglog_sums - np.array(
            [v.at_scale(Scale.LOGLOG) for v in growth_values])
        scale = Scale.LOGLOG
    quarter = max(1, depth // 4)
    tail_max = float(np.max(np.abs(deviations[-quarter:])))
    return ConvergenceProfile(deviations, scale, tail_max)


class T4Window(NamedTuple):
    lower: float
    upper: float
    count: int


def t4_window(potential: Potential, growth: GrowthRate, n: int,
              eps: float) -> T4Window:
    """
    The digits j with (1 - 2 eps) e^{n^alpha} <= phi(j) <= (1 + eps)
    e^{n^alpha} for phi(j) = e^{j^c}, c >= 1, alpha >= 1: j lies in
    [(n^alpha + log(1 - 2 eps))^{1/c}, (n^alpha + log(1 + eps))^{1/c}].
    """
    if potential.kind != PotentialKind.STRETCHED_EXP or \
            potential.parameter < 1:
        raise DomainError('Need e^(j^c) with c >= 1, got {}.'.format(
            potential))
    if growth.kind != GrowthKind.POLY_EXP or growth.parameter < 1:
        raise DomainError('Need e^(n^alpha) with alpha >= 1, got {}.'.format(
            growth))
    if not 0 < eps < 0.25:
        raise DomainError('eps must lie in (0, 1/4), got {}.'.format(eps))
    if n < 1:
        raise DomainError('n must be >= 1, got {}.'.format(n))
    c = potential.parameter
    exponent = float(n) ** growth.parameter
    lower = max(0.0, exponent + math.log1p(-2.0 * eps)) ** (1.0 / c)
    upper = (exponent + math.log1p(eps)) ** (1.0 / c)
    count = max(0, math.floor(upper) - max(1, math.ceil(lower)) + 1)
    return T4Window(lower, upper, count)


def t4_window_count(potential: Potential, growth: GrowthRate, n: int,
                    eps: float) -> int:
    return t4_window(potential, growth, n, eps).count
