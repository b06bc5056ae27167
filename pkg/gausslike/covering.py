# -*- coding: utf-8 -*-
"""
Dimension estimates that do not go through the liminf formula.

covering_log_sum
    log of sum |I|^s over the level-n cylinders allowed by a schedule; for
    the affine system this factorizes into per-level digit-window sums.

dimension_root
    The s at which that sum crosses 1, by bisection, per depth.

local_dimension_profile
    log mu / log r along a sampled point for the uniform digit measure on
    the schedule windows.

product_G_diagnostic, product_ghat_diagnostic
    The covers by blocks of digits whose weights sum into the windows of the
    counting lemmas, bounded with the closed-form G and Ĝ bounds.
"""
import logging
import math
from typing import NamedTuple, Optional, Sequence, Tuple
import warnings

import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from . import EXACT_WINDOW_LIMIT, ROOT_BRACKET
from .counting import log_g_bound, log_ghat_bound
from .dim_formulas import lemA_liminf
from .enums import CoverKind, CoverMethod, Verdict
from .models.ifs_core import (
    IfsSystem, cylinder_interval, log_cylinder_diameter)
from .schedules import DigitSchedule, sample_word
from .utils import log1mexp
from .warning import (
    BracketError, DomainError, HypothesisError, PreAsymptoticWarning,
    WindowUndefinedError)


logger = logging.getLogger(__name__)

# windows wider than this are counted at log scale
_EXACT_COUNT_LIMIT = 2.0 ** 53
# eps fixed by the product covers
_PRODUCT_EPS = 1.0 / 3.0


class DigitWindow(NamedTuple):
    """
    The integers [low, high] of one schedule window, kept as logs once they
    no longer fit exactly.
    """
    log_low: float
    log_high: float
    low: Optional[int] = None
    high: Optional[int] = None

    @property
    def exact(self) -> bool:
        return self.low is not None

    @property
    def log_count(self) -> float:
        if self.exact:
            return math.log(self.high - self.low + 1)
        if self.log_low == self.log_high:
            return 0.0
        # about 2t integers
        return math.log(math.exp(self.log_high) - math.exp(self.log_low)) \
            if self.log_high < 700 else self.log_high + log1mexp(
                self.log_high - self.log_low)


def digit_window(log_s: float, log_t: float,
                 log_ratio: Optional[float] = None) -> DigitWindow:
    """
    The integers of [s - t, s + t] (at least 1). A window holding no
    integer collapses to round(s). `log_ratio` is log(t / s) when known
    more accurately than log_t - log_s.
    """
    if log_ratio is None:
        log_ratio = log_t - log_s if log_t > -math.inf else -math.inf
    ratio = math.exp(log_ratio)
    log_high = log_s + math.log1p(ratio)
    if log_high < math.log(_EXACT_COUNT_LIMIT):
        s, t = math.exp(log_s), math.exp(log_t)
        low = max(1, math.ceil(s - t))
        high = math.floor(s + t)
        if low > high:
            low = high = max(1, int(round(s)))
        return DigitWindow(math.log(low), math.log(high), low, high)
    if log_t < 0:
        # narrower than one integer
        return DigitWindow(log_s, log_s)
    return DigitWindow(log_s + math.log1p(-ratio), log_high)


def log_power_sum(window: DigitWindow, exponent: float,
                   shift: int = 0) -> Tuple[float, CoverMethod]:
    """
    log sum_{a in window} (a + shift)^{-exponent}: term by term below
    EXACT_WINDOW_LIMIT, otherwise by the midpoint integral
    int_{L-1/2}^{U+1/2} x^{-exponent} dx.
    """
    if window.exact and window.high + shift < EXACT_WINDOW_LIMIT:
        digits = np.arange(window.low + shift, window.high + shift + 1,
                           dtype=np.float64)
        return float(logsumexp(-exponent * np.log(digits))), \
            CoverMethod.EXACT
    if window.exact:
        log_a = math.log(window.low + shift - 0.5)
        log_b = math.log(window.high + shift + 0.5)
    elif window.log_low == window.log_high:
        return -exponent * window.log_low, CoverMethod.INTEGRAL
    else:
        log_a, log_b = window.log_low, window.log_high
    gap = log_b - log_a
    if exponent > 1:
        value = ((1.0 - exponent) * log_a +
                 log1mexp((exponent - 1.0) * gap) - math.log(exponent - 1.0))
    elif exponent < 1:
        value = ((1.0 - exponent) * log_b +
                 log1mexp((1.0 - exponent) * gap) - math.log(1.0 - exponent))
    else:
        value = math.log(gap)
    return float(value), CoverMethod.INTEGRAL


class CoverReport(NamedTuple):
    depth: int
    s: float
    # log sum |I|^s; the lower bound for the mirrored system
    log_sum: float
    method: CoverMethod
    kind: CoverKind = CoverKind.CYLINDER
    # mirrored system only
    upper_log_sum: Optional[float] = None

    @property
    def bounds(self) -> Tuple[float, float]:
        upper = self.log_sum if self.upper_log_sum is None \
            else self.upper_log_sum
        return self.log_sum, upper

    @property
    def levels(self) -> int:
        return self.depth + 1 if self.kind == CoverKind.HULL else self.depth

    def band(self, constants: Tuple[float, float]) -> Tuple[float, float]:
        """
        Log-sum band shared by every system with K1 a^{-d} <= p_a <= K2 a^{-d}
        for (K1, K2) = `constants`, read off a mirrored-system report whose
        upper sum is the plain a^{-d} sum. Each level contributes s log K.

        The raw mirrored bounds only bracket the mirrored system itself; an
        affine system with K1 = K2 = 1/zeta(d) lies in the band of the
        mirrored constants (1/4, 1) but can fall below the raw lower bound.

        Raises
        ------------
        DomainError
            Not a mirrored-system report, or a constant is not positive.
        """
        if self.upper_log_sum is None:
            raise DomainError('The band is read off a mirrored-system '
                              'report.')
        k1, k2 = constants
        if not 0 < k1 <= k2:
            raise DomainError('Need 0 < K1 <= K2, got {}.'.format(constants))
        scale = self.levels * self.s
        return (self.upper_log_sum + scale * math.log(k1),
                self.upper_log_sum + scale * math.log(k2))


def _level_sums(system: IfsSystem, window: DigitWindow,
                s: float) -> Tuple[float, float, CoverMethod]:
    ds = system.d * s
    if system.is_affine:
        value, method = log_power_sum(window, ds)
        value -= s * math.log(system.zeta_d)
        return value, value, method
    # xi_a = (a+1)^-2 and lambda_a = a^-2
    lower, method = log_power_sum(window, ds, shift=1)
    upper, _ = log_power_sum(window, ds)
    return lower, upper, method


def covering_log_sum(system: IfsSystem, schedule: DigitSchedule, n: int,
                     s: float,
                     kind: CoverKind = CoverKind.CYLINDER) -> CoverReport:
    """
    For CYLINDER, sum_{i<=n} log sum_{a in W_i} p_a^s. For HULL each
    level-n cylinder is replaced by the hull D_n of its children allowed by
    W_{n+1}, which adds s log sum_{a in W_{n+1}} p_a.
    """
    if n < 1:
        raise DomainError('n must be >= 1, got {}.'.format(n))
    if not 0 < s <= 2:
        raise DomainError('s must lie in (0, 2], got {}.'.format(s))
    indices = np.arange(1, n + 2)
    log_s, log_t = schedule.log_window(indices)
    offsets = schedule.log_offset(indices)
    lower = upper = 0.0
    method = CoverMethod(0)
    for i in range(n):
        window = digit_window(log_s[i], log_t[i], offsets[i])
        level_lower, level_upper, level_method = _level_sums(system, window,
                                                             s)
        lower += level_lower
        upper += level_upper
        method |= level_method
    if kind == CoverKind.HULL:
        window = digit_window(log_s[n], log_t[n], offsets[n])
        hull_lower, hull_upper, level_method = _level_sums(system, window,
                                                           1.0)
        lower += s * hull_lower
        upper += s * hull_upper
        method |= level_method
    if system.is_affine:
        return CoverReport(n, s, lower, method, kind)
    return CoverReport(n, s, lower, method, kind, upper)


class RootTrace(NamedTuple):
    depths: Tuple[int, ...]
    roots: np.ndarray
    # covering sums at the two bracket ends, per depth
    brackets: Tuple[Tuple[float, float], ...]
    lema_partials: np.ndarray

    @property
    def gaps(self) -> np.ndarray:
        return self.roots - self.lema_partials

    @property
    def root(self) -> float:
        return float(self.roots[-1])


def dimension_root(system: IfsSystem, schedule: DigitSchedule, n: int,
                   tol: float = 1e-10,
                   depths: Optional[Sequence[int]] = None,
                   kind: CoverKind = CoverKind.HULL) -> RootTrace:
    """
    The root in s of the covering log-sum at each depth (default just n),
    bracketed by ROOT_BRACKET. The mirrored system is rooted on its upper
    bound.

    Raises
    ------------
    BracketError
        The covering sum has the same sign at both ends of the bracket.
    """
    depths = tuple(depths) if depths is not None else (n,)
    low, high = ROOT_BRACKET

    def log_sum(s, depth):
        return covering_log_sum(system, schedule, depth, s, kind).bounds[1]

    roots, brackets = [], []
    for depth in depths:
        f_low, f_high = log_sum(low, depth), log_sum(high, depth)
        if not (f_low > 0 > f_high):
            raise BracketError(
                'No sign change of the depth-{} covering sum on ({}, {}): '
                '{:.6g}, {:.6g}.'.format(depth, low, high, f_low, f_high),
                f_low, f_high)
        root = optimize.bisect(log_sum, low, high, args=(depth,), xtol=tol)
        if root > 1:
            warnings.warn(
                'Covering root {:.6g} > 1 at depth {}; the depth is too '
                'small.'.format(root, depth), PreAsymptoticWarning)
        logger.debug('%s: depth %d root %.9g', schedule.label, depth, root)
        roots.append(root)
        brackets.append((f_low, f_high))
    partials = lemA_liminf(schedule, system.d,
                           max(4, max(depths))).partials
    lema = np.array([partials[depth - 1] for depth in depths])
    return RootTrace(depths, np.array(roots), tuple(brackets), lema)


class LocalProfile(NamedTuple):
    log_radius: np.ndarray
    log_measure: np.ndarray
    slopes: np.ndarray
    # the measure is a point mass: every window holds one digit
    degenerate: bool


def local_dimension_profile(system: IfsSystem, schedule: DigitSchedule,
                            seed: int, depth: int) -> LocalProfile:
    """
    Follow a sampled point down the schedule. The uniform digit measure gives
    the level-n cylinder mass prod 1/#W_i; the radius is the hull D_n of the
    allowed children.
    """
    if depth < 4:
        raise DomainError('depth must be >= 4, got {}.'.format(depth))
    point = sample_word(schedule, depth + 1, seed)
    indices = np.arange(1, depth + 2)
    log_s, log_t = schedule.log_window(indices)
    offsets = schedule.log_offset(indices)
    windows = [digit_window(log_s[i], log_t[i], offsets[i])
               for i in range(depth + 1)]
    log_measure = -np.cumsum([w.log_count for w in windows[:depth]])
    log_digits = point.log_digit_array()
    log_radius = np.empty(depth)
    for n in range(1, depth + 1):
        if not system.is_affine and len(point.exact_prefix) >= n:
            cylinder = cylinder_interval(system, point.exact_prefix[:n])
            log_cylinder = cylinder.log_diameter
        else:
            bounds = log_cylinder_diameter(system, log_digits[:n])
            log_cylinder = 0.5 * (bounds.lower + bounds.upper)
        children = _level_sums(system, windows[n], 1.0)
        log_radius[n - 1] = log_cylinder + 0.5 * (children[0] + children[1])
    degenerate = bool(log_measure[-1] == 0)
    with np.errstate(invalid='ignore', divide='ignore'):
        slopes = np.where(log_measure == 0, np.nan, log_measure / log_radius)
    return LocalProfile(log_radius, log_measure, slopes, degenerate)


class ProductDiagnostic(NamedTuple):
    # log of the cover bound per k; nan before the first valid window
    log_bounds: np.ndarray
    first_valid: Optional[int]
    verdict: Verdict
    witness: Optional[int]


def product_positions(alpha: float, k_max: int) -> np.ndarray:
    """
    n_0 = 1 and n_k = Phi^{-1}(e^k) = k^{1/alpha}, rounded and kept strictly
    increasing.
    """
    positions = np.empty(k_max + 1, dtype=np.int64)
    positions[0] = 1
    for k in range(1, k_max + 1):
        positions[k] = max(int(math.floor(k ** (1.0 / alpha) + 0.5)),
                           positions[k - 1] + 1)
    return positions


def _log_block_mass(k: int, epsilon: float) -> float:
    # log m(k) for m(k) = (1 - eps/5) e^k - (1 + eps/5) e^{k-1}
    return k + math.log((1.0 - epsilon / 5.0) -
                        (1.0 + epsilon / 5.0) / math.e)


def _product_diagnostic(bound, epsilon: float, k_max: int, d: float,
                        s: float, alpha: float,
                        log_k2: float) -> ProductDiagnostic:
    if not s * d > 1:
        raise DomainError('Need s > 1/d, got s = {} and d = {}.'.format(s, d))
    if k_max < 2:
        raise DomainError('k_max must be >= 2, got {}.'.format(k_max))
    positions = product_positions(alpha, k_max)
    blocks = np.diff(positions)
    log_bounds = np.full(k_max, np.nan)
    first_valid, witness = None, None
    total = 0.0
    for k in range(1, k_max + 1):
        try:
            check = bound(_log_block_mass(k, epsilon), int(blocks[k - 1]))
            valid = check.verdict == Verdict.VALID
        except WindowUndefinedError:
            valid = False
        if not valid:
            if first_valid is not None and witness is None:
                witness = k
            continue
        if first_valid is None:
            first_valid = k
        total += check.log_value
        log_bounds[k - 1] = s * positions[k] * log_k2 + total
    if first_valid is None:
        logger.info('no valid block window up to k = %d', k_max)
        return ProductDiagnostic(log_bounds, None, Verdict.GROWS, k_max)
    if witness is not None:
        return ProductDiagnostic(log_bounds, first_valid, Verdict.GROWS,
                                 witness)
    valid = log_bounds[first_valid - 1:]
    tail = valid[len(valid) // 2:]
    steps = np.diff(tail)
    if steps.size and np.all(steps < 0) and valid[-1] < valid[0]:
        return ProductDiagnostic(log_bounds, first_valid, Verdict.DECAYS,
                                 None)
    rising = np.flatnonzero(steps >= 0)
    offset = first_valid + len(valid) // 2
    witness = int(rising[0]) + offset + 1 if rising.size else k_max
    return ProductDiagnostic(log_bounds, first_valid, Verdict.GROWS, witness)


def product_G_diagnostic(epsilon: float, k_max: int, a: float, d: float,
                         s: float, alpha: float,
                         log_k2: float = 0.0) -> ProductDiagnostic:
    """
    log of K2^{s n_k} prod_{j<=k} G(m(j), n(j), a, 1/3, s) with G replaced
    by its closed-form bound, for the blocks n(k) = n_k - n_{k-1} of the
    power-law I-2a cover. The product starts at the first k whose window is
    valid. DECAYS if the tail of the sequence keeps falling and ends below
    its start.

    Raises
    ------------
    HypothesisError
        alpha <= 1/2.
    DomainError
        s <= 1/d.
    """
    if alpha <= 0.5:
        raise HypothesisError(
            'The block cover needs alpha > 1/2, got {}.'.format(alpha))

    def bound(log_m, n):
        return log_g_bound(log_m, n, a, d, s, _PRODUCT_EPS,
                           closed_upper=True)

    return _product_diagnostic(bound, epsilon, k_max, d, s, alpha, log_k2)


def product_ghat_diagnostic(epsilon: float, k_max: int, b: float, d: float,
                            s: float, alpha: float,
                            log_k2: float = 0.0) -> ProductDiagnostic:
    """
    The log-power counterpart with Ĝ, needing alpha > b/(b+1).
    """
    if alpha <= b / (b + 1.0):
        raise HypothesisError(
            'The block cover needs alpha > b/(b+1) = {:.6g}, got {}.'.format(
                b / (b + 1.0), alpha))

    def bound(log_m, n):
        return log_ghat_bound(log_m, n, b, d, s, _PRODUCT_EPS,
                              closed_upper=True)

    return _product_diagnostic(bound, epsilon, k_max, d, s, alpha, log_k2)
