# -*- coding: utf-8 -*-
"""
Counting oracles for tuples (i_1, ..., i_n) of positive integers whose
weights sum into a window [m, m(1+eps)): the count of such tuples, the sums
G and Ĝ of prod i_k^{-ds} over them, and the closed-form bounds for those
sums with the eps-windows in which the bounds hold.

The weight is i^a for a power-law shape and e^{(log i)^b} for a log-power
shape. Windows are half-open unless the constraint asks for a closed one.
"""
import dataclasses
from fractions import Fraction
import functools
import logging
import math
from typing import Iterator, List, NamedTuple, Optional, Tuple
import warnings

import numpy as np
from scipy import special

from . import ENUMERATION_CAP, ZETA_TOLERANCE
from .enums import PotentialKind, Verdict
from .models.potentials import Potential
from .utils import LOG_FLOAT_MAX
from .warning import (
    ApproximationWarning, DomainError, EnumerationSizeError,
    WindowUndefinedError)


logger = logging.getLogger(__name__)

_ZETA_MAX_TERMS = 2 ** 20
_EPS_UPPER = Fraction(1, 3)
_EM_ORDER = 6
_BERNOULLI = special.bernoulli(2 * _EM_ORDER + 2)


class ZetaValue(NamedTuple):
    value: float
    # certified bound on |value - zeta(s)|
    error: float
    terms: int


@functools.lru_cache(maxsize=256)
def zeta_truncated(s: float, tol: float = ZETA_TOLERANCE) -> ZetaValue:
    """
    zeta(s) as the partial sum over k < K plus the Euler-Maclaurin expansion
    of the tail,

        sum_{k>=K} k^{-s} = K^{1-s}/(s-1) + K^{-s}/2
                            + sum_{j=1}^{p} B_{2j}/(2j)! (s)_{2j-1} K^{1-s-2j}
                            + R_p,

    with (s)_m the rising factorial. For real s > 1, |R_p| is at most the
    first omitted term. The partial sum is compensated (math.fsum), so its
    rounding is a few ulps of the value; K is doubled until the truncation
    plus rounding bound is at most `tol`.
    """
    if not s > 1:
        raise DomainError('zeta(s) diverges for s = {} <= 1.'.format(s))
    if not tol > 0:
        raise DomainError('tol must be positive, got {}.'.format(tol))
    eps = np.finfo(np.float64).eps
    terms = 64
    while True:
        head = np.arange(1, terms, dtype=np.float64) ** -s
        tail, truncation, magnitude = _zeta_tail(s, float(terms))
        value = math.fsum(head) + tail
        # each power carries ~1 ulp, the sum and tail assembly a few more
        rounding = 4.0 * eps * (value + magnitude)
        error = truncation + rounding
        if error <= tol or terms >= _ZETA_MAX_TERMS:
            break
        terms *= 2
    if error > tol:
        warnings.warn(
            'zeta({}) certified only to {:.3g} (asked for {:.3g}).'.format(
                s, error, tol), ApproximationWarning)
    logger.debug('zeta(%g) = %.15g +- %.3g from %d terms', s, value, error,
                 terms)
    return ZetaValue(value, error, terms)


def _zeta_tail(s: float, start: float) -> Tuple[float, float, float]:
    """(sum_{k>=start} k^{-s}, truncation bound, sum of |terms|)."""
    parts = [start ** (1.0 - s) / (s - 1.0), 0.5 * start ** -s]
    for j in range(1, _EM_ORDER + 2):
        parts.append(float(_BERNOULLI[2 * j] / special.factorial(2 * j) *
                           special.poch(s, 2 * j - 1) *
                           start ** (1.0 - s - 2 * j)))
    omitted = abs(parts.pop())
    return math.fsum(parts), omitted, sum(abs(p) for p in parts)


def _exact(value: float) -> Fraction:
    # decimal reading of the float, so eps=0.3 means 3/10
    return Fraction(repr(float(value)))


@dataclasses.dataclass(frozen=True)
class TupleConstraint(object):
    """
    Parameters
    ------------
    m : float
        Lower end of the window, m > 0.

    n : int
        Tuple length.

    shape : Potential
        POWER_LAW(a) for the sets A and G, LOG_POWER(b) for Â and Ĝ.

    eps : float
        Relative window width. The lemmas need eps < 1/3; this is not
        enforced here so that invalid windows can be reported by the bounds.

    closed : bool
        Count sums equal to m(1+eps) as well.
    """
    m: float
    n: int
    shape: Potential
    eps: float
    closed: bool = False

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise DomainError('m must be positive, got {}.'.format(self.m))
        if self.n < 1:
            raise DomainError('n must be >= 1, got {}.'.format(self.n))
        if not self.eps > 0:
            raise DomainError('eps must be positive, got {}.'.format(
                self.eps))
        if self.shape.kind == PotentialKind.STRETCHED_EXP:
            raise DomainError('No counting lemma for {}.'.format(self.shape))

    @property
    def integer_weights(self) -> bool:
        return (self.shape.kind == PotentialKind.POWER_LAW and
                float(self.shape.parameter).is_integer())

    @property
    def upper(self) -> float:
        return float(_exact(self.m) * (1 + _exact(self.eps)))

    def contains(self, total) -> bool:
        if self.integer_weights:
            low = _exact(self.m)
            high = low * (1 + _exact(self.eps))
        else:
            low, high = self.m, self.m * (1.0 + self.eps)
        if total < low:
            return False
        return total <= high if self.closed else total < high


class Enumeration(NamedTuple):
    constraint: TupleConstraint
    count: int
    # partial tuples materialized on the way
    nodes: int

    def stream(self) -> Iterator[Tuple[int, ...]]:
        return iter_tuples(self.constraint)


def tuple_weights(shape: Potential, max_index: int) -> np.ndarray:
    """
    Weights of the indices 1..max_index: i^a, or e^{(log i)^b}. Integer
    powers come back as int64 whenever they fit, so that window tests are
    exact.
    """
    indices = np.arange(1, max_index + 1)
    p = shape.parameter
    if shape.kind == PotentialKind.POWER_LAW:
        if float(p).is_integer() and float(max_index) ** p < 2.0 ** 53:
            return indices.astype(np.int64) ** int(p)
        return indices.astype(np.float64) ** p
    if shape.kind == PotentialKind.LOG_POWER:
        return np.exp(np.log(indices) ** p)
    raise DomainError('No counting weights for {}.'.format(shape))


def _max_index(constraint: TupleConstraint) -> int:
    # largest single index whose weight leaves room for n-1 ones
    room = constraint.upper - (constraint.n - 1)
    if room < 1:
        return 0
    p = constraint.shape.parameter
    if constraint.shape.kind == PotentialKind.POWER_LAW:
        guess = room ** (1.0 / p)
    else:
        guess = math.exp(math.log(room) ** (1.0 / p))
    return int(math.floor(guess)) + 1


def _window_thresholds(constraint: TupleConstraint, weights: np.ndarray):
    if weights.dtype.kind == 'i':
        low = _exact(constraint.m)
        high = low * (1 + _exact(constraint.eps))
        first = math.ceil(low)
        # exclusive integer end
        stop = math.floor(high) + 1 if constraint.closed else math.ceil(high)
        return first, stop, 'left'
    high = constraint.m * (1.0 + constraint.eps)
    return constraint.m, high, 'right' if constraint.closed else 'left'


def _half_tuples(weights: np.ndarray, log_index: np.ndarray, length: int,
                 budget, cap: int) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    All tuples of `length` indices whose weight sum stays within `budget`,
    as (weight sums, sums of log i). The empty tuple has sum 0.
    """
    sums = np.zeros(1, dtype=weights.dtype)
    logs = np.zeros(1)
    nodes = 0
    for level in range(length):
        remaining = length - level - 1
        total = sums[:, None] + weights[None, :]
        keep = total <= budget - remaining
        sums = total[keep]
        logs = (logs[:, None] + log_index[None, :])[keep]
        nodes += sums.size
        if nodes > cap:
            raise EnumerationSizeError(
                'Enumeration exceeded {} nodes.'.format(cap), nodes)
    return sums, logs, nodes


def _meet_in_the_middle(constraint: TupleConstraint, ds: Optional[float],
                        cap: int) -> Tuple[int, float, int]:
    """
    Count (and, with `ds`, the sum of prod i_k^{-ds}) over the window by
    splitting each tuple into a left and a right half and matching every
    left half against the sorted right halves.
    """
    n = constraint.n
    max_index = _max_index(constraint)
    if max_index < 1:
        return 0, 0.0, 0
    weights = tuple_weights(constraint.shape, max_index)
    log_index = np.log(np.arange(1, max_index + 1, dtype=np.float64))
    first, stop, side = _window_thresholds(constraint, weights)
    budget = stop - 1 if weights.dtype.kind == 'i' else stop
    n_left = n // 2
    n_right = n - n_left
    estimate = sum(max_index ** k for k in range(1, n_left + 1))
    estimate += sum(max_index ** k for k in range(1, n_right + 1))
    logger.debug('%s: %d indices, at most %d half tuples', constraint,
                 max_index, estimate)
    if estimate > cap:
        raise EnumerationSizeError(
            'Estimated {} half tuples exceed the cap {}.'.format(
                estimate, cap), estimate)
    left_sums, left_logs, left_nodes = _half_tuples(
        weights, log_index, n_left, budget - n_right, cap)
    right_sums, right_logs, right_nodes = _half_tuples(
        weights, log_index, n_right, budget - n_left, cap - left_nodes)
    order = np.argsort(right_sums, kind='stable')
    right_sums = right_sums[order]
    lo = np.searchsorted(right_sums, first - left_sums, side='left')
    hi = np.searchsorted(right_sums, stop - left_sums, side=side)
    hi = np.maximum(hi, lo)
    count = int(np.sum(hi - lo))
    total = 0.0
    if ds is not None and count:
        products = np.exp(-ds * right_logs[order])
        # suffix sums run from the small products, limiting cancellation
        suffix = np.concatenate([np.cumsum(products[::-1])[::-1], [0.0]])
        inner = suffix[lo] - suffix[hi]
        total = float(np.sum(np.exp(-ds * left_logs) * inner))
    return count, total, left_nodes + right_nodes


def enumerate_A(constraint: TupleConstraint,
                cap: int = ENUMERATION_CAP) -> Enumeration:
    """
    Exact number of ordered tuples in the window. `cap` bounds the number
    of partial tuples materialized.

    Raises
    ------------
    EnumerationSizeError
        The estimated or actual enumeration size exceeds `cap`.
    """
    count, _, nodes = _meet_in_the_middle(constraint, None, cap)
    return Enumeration(constraint, count, nodes)


def iter_tuples(constraint: TupleConstraint) -> Iterator[Tuple[int, ...]]:
    """
    The tuples of the window in lexicographic order, by depth-first search
    abandoning a prefix once its sum plus one per remaining slot leaves the
    window.
    """
    max_index = _max_index(constraint)
    weights = tuple_weights(constraint.shape, max(max_index, 1)).tolist()
    upper = (_exact(constraint.m) * (1 + _exact(constraint.eps))
             if constraint.integer_weights
             else constraint.m * (1.0 + constraint.eps))
    n = constraint.n
    prefix: List[int] = []

    def visit(partial):
        remaining = n - len(prefix)
        if remaining == 0:
            if constraint.contains(partial):
                yield tuple(prefix)
            return
        for index, weight in enumerate(weights, start=1):
            total = partial + weight
            reach = total + (remaining - 1)
            if reach > upper or (reach == upper and not constraint.closed):
                break
            prefix.append(index)
            yield from visit(total)
            prefix.pop()

    if max_index >= 1:
        yield from visit(0)


def _check_shape(constraint: TupleConstraint, kind: PotentialKind) -> None:
    if constraint.shape.kind != kind:
        raise DomainError('{} needs a {} shape, got {}.'.format(
            'g_sum' if kind == PotentialKind.POWER_LAW else 'ghat_sum',
            kind.name, constraint.shape))


def _check_ds(d: float, s: float) -> float:
    ds = d * s
    if not ds > 1:
        raise DomainError('The sums need ds > 1, got {}.'.format(ds))
    return ds


def g_sum(constraint: TupleConstraint, d: float, s: float,
          cap: int = ENUMERATION_CAP) -> float:
    """
    G(m, n, a, eps, s), the sum of prod i_k^{-ds} over the power-law window.
    """
    _check_shape(constraint, PotentialKind.POWER_LAW)
    ds = _check_ds(d, s)
    return _meet_in_the_middle(constraint, ds, cap)[1]


def ghat_sum(constraint: TupleConstraint, d: float, s: float,
             cap: int = ENUMERATION_CAP) -> float:
    """
    Ĝ(m, n, b, eps, s), the same sum over the log-power window.
    """
    _check_shape(constraint, PotentialKind.LOG_POWER)
    ds = _check_ds(d, s)
    return _meet_in_the_middle(constraint, ds, cap)[1]


@dataclasses.dataclass(frozen=True)
class BoundConstants(object):
    c1: float
    c2: float
    c3: float
    c4: float
    c_hat: float
    zeta_ds: float


class BoundCheck(NamedTuple):
    log_value: float
    verdict: Verdict
    # open lower end of the eps-window
    window_lower: float
    constants: BoundConstants

    @property
    def value(self) -> float:
        return (math.exp(self.log_value) if self.log_value < LOG_FLOAT_MAX
                else math.inf)


def bound_constants(a: float, d: float, s: float) -> BoundConstants:
    """
    C4 is the ceiling constant of the power-law case split at a = 1; then
    C1 = 2^{(ds+a)/a} C4, C2 = 6 * 3^{(ds-1)/a} zeta(ds), C3 = 1/C4 and
    Ĉ = 2 * 3^{ds} zeta(ds).
    """
    ds = _check_ds(d, s)
    if not a > 0:
        raise DomainError('a must be positive, got {}.'.format(a))
    if a >= 1:
        c4 = 3.0 ** (1.0 - 1.0 / a) / a
    else:
        c4 = (4.0 / 3.0) ** (1.0 / a - 1.0) / a
    zeta_ds = zeta_truncated(ds).value
    return BoundConstants(
        c1=2.0 ** ((ds + a) / a) * c4,
        c2=6.0 * 3.0 ** ((ds - 1.0) / a) * zeta_ds,
        c3=1.0 / c4,
        c4=c4,
        c_hat=2.0 * 3.0 ** ds * zeta_ds,
        zeta_ds=zeta_ds)


def _eps_verdict(eps: float, log_lower: float, closed_upper: bool) -> Verdict:
    above = math.log(eps) > log_lower
    below = (_exact(eps) <= _EPS_UPPER if closed_upper
             else _exact(eps) < _EPS_UPPER)
    return Verdict.VALID if above and below else Verdict.INVALID


def log_g_bound(log_m: float, n: int, a: float, d: float, s: float,
                eps: float, closed_upper: bool = False) -> BoundCheck:
    """
    log of C1 C2^{n-1} eps m^{(1-ds)/a}, with m given as log m so that
    m = e^k stays usable. VALID iff C3 (m 3^{2-n})^{-1/a} < eps < 1/3.
    """
    constants = bound_constants(a, d, s)
    ds = d * s
    log_value = (math.log(constants.c1) + (n - 1) * math.log(constants.c2) +
                 math.log(eps) + (1.0 - ds) / a * log_m)
    log_lower = (math.log(constants.c3) -
                 (log_m + (2 - n) * math.log(3.0)) / a)
    verdict = _eps_verdict(eps, log_lower, closed_upper)
    return BoundCheck(log_value, verdict, math.exp(log_lower), constants)


def g_bound(constraint: TupleConstraint, d: float, s: float,
            closed_upper: bool = False) -> BoundCheck:
    _check_shape(constraint, PotentialKind.POWER_LAW)
    return log_g_bound(math.log(constraint.m), constraint.n,
                       constraint.shape.parameter, d, s, constraint.eps,
                       closed_upper)


def log_ghat_bound(log_m: float, n: int, b: float, d: float, s: float,
                   eps: float, closed_upper: bool = False) -> BoundCheck:
    """
    log of 6 Ĉ^{n-1} eps e^{(1-ds)(log m)^{1/b}}. VALID iff
    e^{-(log(m 3^{2-n}))^{1/b}} < eps < 1/3.

    Raises
    ------------
    WindowUndefinedError
        m 3^{2-n} <= 1.
    """
    constants = bound_constants(1.0, d, s)
    ds = d * s
    log_scaled = log_m + (2 - n) * math.log(3.0)
    if log_scaled <= 0:
        raise WindowUndefinedError(
            'm 3^(2-n) = e^{} <= 1; the eps-window is undefined.'.format(
                log_scaled))
    if log_m < 0:
        raise DomainError('log m must be >= 0, got {}.'.format(log_m))
    log_value = (math.log(6.0) + (n - 1) * math.log(constants.c_hat) +
                 math.log(eps) + (1.0 - ds) * log_m ** (1.0 / b))
    log_lower = -log_scaled ** (1.0 / b)
    verdict = _eps_verdict(eps, log_lower, closed_upper)
    return BoundCheck(log_value, verdict, math.exp(log_lower), constants)


def ghat_bound(constraint: TupleConstraint, d: float, s: float,
               closed_upper: bool = False) -> BoundCheck:
    _check_shape(constraint, PotentialKind.LOG_POWER)
    return log_ghat_bound(math.log(constraint.m), constraint.n,
                          constraint.shape.parameter, d, s, constraint.eps,
                          closed_upper)
