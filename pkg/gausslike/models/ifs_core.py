# -*- coding: utf-8 -*-
"""
Two concrete d-decaying Gauss-like systems of contractions of [0, 1].

AFFINE_POWER_LAW
    f_i(x) = L_{i-1} + p_i x with p_i = i^{-d}/zeta(d) and L_i = p_1 + ... +
    p_i. Cylinders have diameter p_{a_1}...p_{a_n} exactly.

MIRRORED_GAUSS_CF
    f_i = h o g_i o h with g_i(x) = 1/(i + x) and h(x) = 1 - x, so
    f_i(x) = 1 - 1/(i + 1 - x). Branch i maps [0, 1] onto
    [(i-1)/i, i/(i+1)], decreasingly. Cylinders are the mirror images of the
    continued-fraction cylinders and have exact rational endpoints.
"""
import dataclasses
from fractions import Fraction
import functools
import logging
import math
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from .. import MATERIALIZATION_LIMIT, ZETA_TOLERANCE
from ..counting import zeta_truncated
from ..enums import SystemKind, Verdict
from ..warning import (
    AmbiguousExpansionError, DomainError, MaterializationError)


logger = logging.getLogger(__name__)

# left endpoints L_0..L_n are tabulated up to this index
_ENDPOINT_TABLE_SIZE = 2 ** 16
# affine expansion rejects points this close to a cylinder boundary
_BOUNDARY_TOLERANCE = 1e-12
# digits tried when estimating the contraction of m-fold compositions
_CONTRACTION_DIGITS = 4


@dataclasses.dataclass(frozen=True)
class Word(object):
    """
    A finite digit sequence a_1 ... a_n. The empty word stands for [0, 1].
    """
    digits: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        digits = tuple(int(a) for a in self.digits)
        for position, a in enumerate(digits, start=1):
            if a < 1:
                raise DomainError('Digit {} at position {} is not >= 1.'
                                  .format(a, position))
        object.__setattr__(self, 'digits', digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __add__(self, other: 'Word') -> 'Word':
        return Word(self.digits + tuple(other))

    def log_digits(self) -> np.ndarray:
        return np.log(np.asarray(self.digits, dtype=np.float64))


class CylinderInterval(NamedTuple):
    word: Word
    lo: float
    hi: float
    log_diameter: float
    # only for systems with rational endpoints
    exact: Optional[Tuple[Fraction, Fraction]] = None

    def __contains__(self, x) -> bool:
        if self.exact is not None and isinstance(x, (Fraction, int)):
            return self.exact[0] <= x <= self.exact[1]
        return self.lo <= x <= self.hi


class DiameterBounds(NamedTuple):
    lower: float
    upper: float

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@functools.lru_cache(maxsize=32)
def _affine_left_endpoints(d: float) -> np.ndarray:
    zeta_d = zeta_truncated(d).value
    lengths = np.arange(1, _ENDPOINT_TABLE_SIZE + 1, dtype=np.float64) ** -d
    lengths /= zeta_d
    return np.concatenate([[0.0], np.cumsum(lengths)])


@dataclasses.dataclass(frozen=True)
class IfsSystem(object):
    """
    Parameters
    ------------
    kind : SystemKind

    d : float
        Decay exponent, d > 1. Always 2 for MIRRORED_GAUSS_CF.
    """
    kind: SystemKind
    d: float = 2.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.d) or self.d <= 1:
            raise DomainError('d must be > 1, got {}.'.format(self.d))
        if self.kind == SystemKind.MIRRORED_GAUSS_CF and self.d != 2:
            raise DomainError(
                'The mirrored Gauss system has d = 2, got {}.'.format(self.d))

    @classmethod
    def affine(cls, d: float) -> 'IfsSystem':
        return cls(SystemKind.AFFINE_POWER_LAW, float(d))

    @classmethod
    def mirrored_gauss(cls) -> 'IfsSystem':
        return cls(SystemKind.MIRRORED_GAUSS_CF, 2.0)

    @property
    def is_affine(self) -> bool:
        return self.kind == SystemKind.AFFINE_POWER_LAW

    @property
    def zeta_d(self) -> float:
        return zeta_truncated(self.d, ZETA_TOLERANCE).value

    @property
    def distortion_constants(self) -> Tuple[float, float]:
        """
        (K1, K2) with K1 i^{-d} <= xi_i <= lambda_i <= K2 i^{-d}.
        """
        if self.is_affine:
            return 1.0 / self.zeta_d, 1.0 / self.zeta_d
        # i^2/(i+1)^2 is smallest at i = 1
        return 0.25, 1.0

    def log_branch_length(self, i):
        """
        log p_i, vectorized over i. Affine only.
        """
        return -self.d * np.log(i) - math.log(self.zeta_d)

    def left_endpoint(self, i: int) -> float:
        """
        L_{i-1}, the left end of the image of branch i (affine), computed
        from the Hurwitz zeta tail beyond the tabulated range.
        """
        _check_index(i)
        if i - 1 <= _ENDPOINT_TABLE_SIZE:
            return float(_affine_left_endpoints(self.d)[i - 1])
        return 1.0 - float(special.zeta(self.d, i)) / self.zeta_d

    def branch(self, i: int, x):
        _check_index(i)
        x = np.asarray(x, dtype=np.float64)
        if self.is_affine:
            return self.left_endpoint(i) + math.exp(
                self.log_branch_length(i)) * x
        return 1.0 - 1.0 / (i + 1.0 - x)

    def branch_derivative(self, i: int, x):
        _check_index(i)
        x = np.asarray(x, dtype=np.float64)
        if self.is_affine:
            return np.full_like(x, math.exp(self.log_branch_length(i)))
        return -1.0 / (i + 1.0 - x) ** 2


def _check_index(i: int) -> None:
    if i < 1:
        raise DomainError('Branch indices start at 1, got {}.'.format(i))


def _as_word(word: Union[Word, Iterable[int]]) -> Word:
    return word if isinstance(word, Word) else Word(tuple(word))


def _check_materializable(word: Word) -> None:
    for a in word:
        if a >= MATERIALIZATION_LIMIT:
            raise MaterializationError(
                'Digit {} >= 2^40 has no exact endpoints; use '
                'log_cylinder_diameter.'.format(a))


def _convergent_denominators(word: Word) -> Tuple[int, int, int, int]:
    """
    (p_n, q_n, p_{n-1}, q_{n-1}) of the continued fraction [0; a_1, ..., a_n].
    """
    p, q, p_prev, q_prev = 0, 1, 1, 0
    for a in word:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return p, q, p_prev, q_prev


def branch_bounds(system: IfsSystem, i: int) -> Tuple[float, float]:
    """
    (xi_i, lambda_i): the extreme values of |f_i'| on [0, 1].
    """
    _check_index(i)
    if system.is_affine:
        p = math.exp(system.log_branch_length(i))
        return p, p
    return 1.0 / (i + 1) ** 2, 1.0 / i ** 2


def cylinder_interval(system: IfsSystem,
                      word: Union[Word, Iterable[int]]) -> CylinderInterval:
    """
    f_{a_1} o ... o f_{a_n}([0, 1]).

    Raises
    ------------
    MaterializationError
        Some digit is at least 2^40.
    """
    word = _as_word(word)
    _check_materializable(word)
    if not len(word):
        return CylinderInterval(word, 0.0, 1.0, 0.0,
                                (Fraction(0), Fraction(1)))
    if system.is_affine:
        lo, width = 0.0, 1.0
        for a in reversed(word.digits):
            p = math.exp(system.log_branch_length(a))
            lo = system.left_endpoint(a) + p * lo
            width *= p
        log_diameter = float(np.sum(system.log_branch_length(
            np.asarray(word.digits, dtype=np.float64))))
        return CylinderInterval(word, lo, lo + width, log_diameter)
    p, q, p_prev, q_prev = _convergent_denominators(word)
    ends = sorted([1 - Fraction(p, q), 1 - Fraction(p + p_prev, q + q_prev)])
    log_diameter = -math.log(q) - math.log(q + q_prev)
    return CylinderInterval(word, float(ends[0]), float(ends[1]),
                            log_diameter, (ends[0], ends[1]))


def log_cylinder_diameter(
        system: IfsSystem,
        digits: Union[Word, Sequence[float], np.ndarray]) -> DiameterBounds:
    """
    Two-sided bounds sum log xi_{a_i} <= log |I_n| <= sum log lambda_{a_i},
    by the chain rule and the mean value theorem. A Word is read as exact
    digits; anything else as the log-digits log a_i, so digits far beyond
    2^40 are fine. The bounds coincide for the affine system.
    """
    if isinstance(digits, Word):
        log_digits = digits.log_digits()
    else:
        log_digits = np.asarray(digits, dtype=np.float64)
    if log_digits.size == 0:
        return DiameterBounds(0.0, 0.0)
    if np.any(log_digits < 0):
        raise DomainError('Log-digits must be >= 0.')
    if system.is_affine:
        value = float(np.sum(-system.d * log_digits)) - (
            log_digits.size * math.log(system.zeta_d))
        return DiameterBounds(value, value)
    # log (a+1) = log a + log(1 + 1/a)
    upper = float(np.sum(-2.0 * log_digits))
    lower = float(np.sum(-2.0 * (log_digits + np.log1p(np.exp(-log_digits)))))
    return DiameterBounds(lower, upper)


def _affine_digit(system: IfsSystem, x: float) -> int:
    table = _affine_left_endpoints(system.d)
    index = int(np.searchsorted(table, x, side='right'))
    if index < table.size:
        return index
    # beyond the table: exponential then binary search on L_{i-1} <= x
    low, high = _ENDPOINT_TABLE_SIZE + 1, 2 * _ENDPOINT_TABLE_SIZE
    while system.left_endpoint(high) <= x:
        low, high = high, 2 * high
    while high - low > 1:
        middle = (low + high) // 2
        if system.left_endpoint(middle) <= x:
            low = middle
        else:
            high = middle
    return low


def expand_point(system: IfsSystem, x, depth: int) -> Word:
    """
    The first `depth` digits of x. Affine expansion runs in floating point
    and refuses points within 1e-12 (in the rescaled coordinate) of a
    cylinder boundary; the mirrored system runs on the exact rational value
    of x.

    Raises
    ------------
    AmbiguousExpansionError
        x is an endpoint of some cylinder of length <= depth.
    """
    if depth < 0:
        raise DomainError('depth must be >= 0, got {}.'.format(depth))
    if not 0 < x < 1:
        raise DomainError('x must lie in (0, 1), got {}.'.format(x))
    digits: List[int] = []
    if system.is_affine:
        y = float(x)
        for level in range(depth):
            a = _affine_digit(system, y)
            left = system.left_endpoint(a)
            length = math.exp(system.log_branch_length(a))
            y = (y - left) / length
            if y < _BOUNDARY_TOLERANCE or y > 1.0 - _BOUNDARY_TOLERANCE:
                raise AmbiguousExpansionError(
                    '{} lies on a boundary of a cylinder of length {}.'.format(
                        x, level + 1))
            digits.append(a)
        return Word(tuple(digits))
    # classical continued fraction of 1 - x
    y = 1 - Fraction(x)
    for level in range(depth):
        inverse = 1 / y
        a = math.floor(inverse)
        y = inverse - a
        if y == 0:
            raise AmbiguousExpansionError(
                '{} is an endpoint of a cylinder of length {}.'.format(
                    x, level + 1))
        digits.append(a)
    return Word(tuple(digits))


def distortion_ratio(system: IfsSystem, first: Union[Word, Iterable[int]],
                     second: Union[Word, Iterable[int]]) -> float:
    """
    |I(first second)| / (|I(first)| |I(second)|). Identically 1 for the
    affine system; exact rational arithmetic for the mirrored one.
    """
    first, second = _as_word(first), _as_word(second)
    if not len(first) or not len(second):
        raise DomainError('distortion_ratio needs two nonempty words.')
    _check_materializable(first)
    _check_materializable(second)
    joined = first + second
    if system.is_affine:
        log_ratio = (cylinder_interval(system, joined).log_diameter -
                     cylinder_interval(system, first).log_diameter -
                     cylinder_interval(system, second).log_diameter)
        return math.exp(log_ratio)

    def inverse_diameter(word):
        _, q, _, q_prev = _convergent_denominators(word)
        return q * (q + q_prev)

    return float(Fraction(inverse_diameter(first) * inverse_diameter(second),
                          inverse_diameter(joined)))


class DistortionBand(NamedTuple):
    lower: float
    upper: float
    samples: int


def distortion_band(system: IfsSystem, pairs: int = 2000,
                    max_length: int = 8, max_digit: int = 50,
                    seed: int = 0) -> DistortionBand:
    """
    Empirical [K3, K4] over random word pairs with lengths and digits drawn
    uniformly from 1..max_length and 1..max_digit.
    """
    rng = np.random.default_rng(seed)
    ratios = np.empty(pairs)
    for k in range(pairs):
        words = [Word(tuple(rng.integers(1, max_digit + 1, size=length)))
                 for length in rng.integers(1, max_length + 1, size=2)]
        ratios[k] = distortion_ratio(system, words[0], words[1])
    logger.info('%s: distortion ratios in [%.6g, %.6g] over %d pairs',
                system.kind.name, ratios.min(), ratios.max(), pairs)
    return DistortionBand(float(ratios.min()), float(ratios.max()), pairs)


@dataclasses.dataclass
class AxiomCheck(object):
    axiom: int
    verdict: Verdict
    detail: str = ''
    witness: Optional[str] = None


@dataclasses.dataclass
class AxiomReport(object):
    system: IfsSystem
    checks: List[AxiomCheck]
    k1: float
    k2: float
    # the m-fold compositions contract by at most `contraction`
    contraction: float
    m: Optional[int]

    @property
    def passed(self) -> bool:
        return all(c.verdict == Verdict.PASS for c in self.checks)


def _composition_derivative(system: IfsSystem, word: Sequence[int],
                            grid: np.ndarray) -> np.ndarray:
    y = grid.copy()
    derivative = np.ones_like(grid)
    for a in reversed(word):
        derivative *= np.abs(system.branch_derivative(a, y))
        y = system.branch(a, y)
    return derivative


def _branch_images(system: IfsSystem, index_limit: int,
                   grid: np.ndarray) -> np.ndarray:
    images = np.array([system.branch(i, grid)
                       for i in range(1, index_limit + 1)])
    return np.sort(images, axis=1)


def check_system_axioms(system: IfsSystem, index_limit: int = 100,
                        sample_grid: int = 65) -> AxiomReport:
    """
    Check the five defining conditions on branches 1..index_limit at
    `sample_grid` equally spaced points of [0, 1]:

    1. each branch maps [0, 1] into [0, 1] with nonvanishing derivative;
    2. the images tile [0, L_N] without gaps or overlaps and their total
       length increases towards 1;
    3. images are ordered left to right by index;
    4. some m-fold composition contracts uniformly (m = 1, 2, 3 tried);
    5. xi_i <= |f_i'| <= lambda_i with K1 i^{-d} <= xi_i and
       lambda_i <= K2 i^{-d}.

    Failures are reported with a witness, never raised.
    """
    if index_limit < 2 or sample_grid < 2:
        raise DomainError('index_limit and sample_grid must be >= 2.')
    grid = np.linspace(0.0, 1.0, sample_grid)
    images = _branch_images(system, index_limit, grid)
    checks = []

    derivatives = np.array([np.abs(system.branch_derivative(i, grid))
                            for i in range(1, index_limit + 1)])
    inside = (images >= 0.0) & (images <= 1.0)
    if inside.all() and (derivatives > 0).all():
        checks.append(AxiomCheck(1, Verdict.PASS, 'C1 injective into [0,1]'))
    else:
        i = int(np.argwhere(~inside | (derivatives <= 0))[0][0]) + 1
        checks.append(AxiomCheck(1, Verdict.FAIL,
                                 witness='branch {}'.format(i)))

    gaps = np.abs(images[1:, 0] - images[:-1, -1])
    covered = images[:, -1] - images[:, 0]
    total = np.cumsum(covered)
    tiling = bool(np.all(gaps <= 1e-12) and abs(images[0, 0]) <= 1e-12)
    increasing = bool(np.all(np.diff(total) > 0) and total[-1] <= 1 + 1e-12)
    if tiling and increasing:
        checks.append(AxiomCheck(
            2, Verdict.PASS,
            'images of 1..{} cover [0, {:.12g}]'.format(index_limit,
                                                        total[-1])))
    else:
        i = int(np.argmax(gaps)) + 1
        checks.append(AxiomCheck(
            2, Verdict.FAIL, witness='gap {:.3g} after branch {}'.format(
                gaps[i - 1], i)))

    disorder = images[1:, 0] < images[:-1, -1] - 1e-12
    if disorder.any():
        i = int(np.argmax(disorder)) + 1
        checks.append(AxiomCheck(
            3, Verdict.FAIL, witness='branches {} and {}'.format(i, i + 1)))
    else:
        checks.append(AxiomCheck(3, Verdict.PASS, 'ordered by index'))

    digits = range(1, min(index_limit, _CONTRACTION_DIGITS) + 1)
    m_found, contraction = None, math.inf
    for m in range(1, 4):
        words = np.array(np.meshgrid(*[digits] * m)).reshape(m, -1).T
        contraction = max(float(_composition_derivative(system, w, grid).max())
                          for w in words)
        if contraction < 1.0:
            m_found = m
            break
    if m_found is None:
        checks.append(AxiomCheck(
            4, Verdict.FAIL, witness='sup |(f^3)\'| = {:.6g}'.format(
                contraction)))
    else:
        checks.append(AxiomCheck(
            4, Verdict.PASS, 'm = {}, A = {:.6g}'.format(m_found,
                                                          contraction)))

    indices = np.arange(1, index_limit + 1)
    bounds = np.array([branch_bounds(system, i) for i in indices])
    k1, k2 = system.distortion_constants
    scaled = bounds * indices[:, None] ** system.d
    slack = 1e-12
    within = ((derivatives >= bounds[:, :1] * (1 - slack)) &
              (derivatives <= bounds[:, 1:] * (1 + slack)))
    sandwich = ((scaled[:, 0] >= k1 * (1 - slack)) &
                (scaled[:, 1] <= k2 * (1 + slack)))
    if within.all() and sandwich.all():
        checks.append(AxiomCheck(
            5, Verdict.PASS, 'K1 = {:.12g}, K2 = {:.12g}'.format(k1, k2)))
    else:
        i = int(np.argwhere(~within.all(axis=1) | ~sandwich)[0][0]) + 1
        checks.append(AxiomCheck(5, Verdict.FAIL,
                                 witness='branch {}'.format(i)))
    report = AxiomReport(system, checks, k1, k2, contraction, m_found)
    logger.info('%s d=%g: axioms %s', system.kind.name, system.d,
                'pass' if report.passed else 'FAIL')
    return report
