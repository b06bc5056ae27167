# -*- coding: utf-8 -*-
"""
Closed-form Hausdorff dimensions of E_phi(Phi) by regime, the liminf
formula for the dimension of B(s_n, t_n, N) and the Moran root s(M) of the
affine model restricted to digits <= M.
"""
import dataclasses
import logging
import math
from typing import TYPE_CHECKING, NamedTuple, Optional, Tuple

import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from .enums import GrowthKind, PotentialKind, RegimeTag
from .models.ifs_core import IfsSystem, branch_bounds
from .models.potentials import GrowthRate, Potential
from .warning import BracketError, DomainError

if TYPE_CHECKING:
    from .schedules import DigitSchedule


logger = logging.getLogger(__name__)

_CRITICAL_TOLERANCE = 1e-12


@dataclasses.dataclass(frozen=True)
class Regime(object):
    """
    Parameters
    ------------
    tag : RegimeTag

    threshold : float, optional
        The critical growth exponent separating the I-1 and I-2 cases.

    subcase : str, optional
        'a' or 'b' for the I-2 cases of the first two families (alpha below
        or above 1); these need different constructions.
    """
    tag: RegimeTag
    threshold: Optional[float] = None
    subcase: Optional[str] = None

    @property
    def covered(self) -> bool:
        return not self.tag & RegimeTag.NO_VALUE

    @property
    def label(self) -> str:
        text = self.tag.name.replace('_', '-')
        return text + self.subcase if self.subcase else text


@dataclasses.dataclass(frozen=True)
class DimensionResult(object):
    value: Optional[float]
    regime: Regime
    formula_id: str
    requires_distortion: bool = False


def _near(x: float, y: float) -> bool:
    return math.isclose(x, y, rel_tol=_CRITICAL_TOLERANCE,
                        abs_tol=_CRITICAL_TOLERANCE)


def _poly_regime(alpha: float, threshold: float, below: RegimeTag,
                 above: RegimeTag, split_subcases: bool) -> Regime:
    if _near(alpha, threshold):
        return Regime(RegimeTag.CRITICAL, threshold)
    if alpha < threshold:
        return Regime(below, threshold)
    subcase = ('a' if alpha < 1 else 'b') if split_subcases else None
    return Regime(above, threshold, subcase)


def classify_regime(potential: Potential, growth: GrowthRate) -> Regime:
    p = potential.parameter
    alpha = growth.parameter
    if potential.kind == PotentialKind.POWER_LAW:
        if growth.kind == GrowthKind.POLY_EXP:
            return _poly_regime(alpha, 0.5, RegimeTag.T1_I1, RegimeTag.T1_I2,
                                True)
        if growth.kind == GrowthKind.SUPER_EXP:
            return Regime(RegimeTag.T1_II)
    elif potential.kind == PotentialKind.LOG_POWER:
        if growth.kind == GrowthKind.POLY_EXP:
            return _poly_regime(alpha, p / (p + 1.0), RegimeTag.T2_I1,
                                RegimeTag.T2_I2, True)
        if growth.kind == GrowthKind.SUPER_EXP:
            return Regime(RegimeTag.T2_II)
    elif p < 1:
        if growth.kind == GrowthKind.POLY_EXP:
            return _poly_regime(alpha, 1.0, RegimeTag.T3_I1, RegimeTag.T3_I2,
                                False)
        if growth.kind == GrowthKind.SUPER_EXP:
            return Regime(RegimeTag.T3_II)
        return Regime(RegimeTag.T3_III)
    elif growth.kind == GrowthKind.POLY_EXP:
        # alpha = 1 belongs to the zero-dimensional case here
        if alpha < 1:
            return Regime(RegimeTag.T4_I1, 1.0)
        return Regime(RegimeTag.T4_I2, 1.0)
    return Regime(RegimeTag.UNCOVERED)


def _formula(potential: Potential, growth: GrowthRate, d: float,
             tag: RegimeTag) -> Tuple[float, str]:
    p = potential.parameter
    g = growth.parameter
    if tag & RegimeTag.FULL:
        return 1.0, 'full dimension'
    if tag in (RegimeTag.T1_I2, RegimeTag.T2_I2):
        return 1.0 / d, '1/d'
    if tag == RegimeTag.T1_II:
        return 1.0 / (d * g - g + 1.0), '1/(d*beta - beta + 1)'
    if tag == RegimeTag.T2_II:
        root = g ** (1.0 / p)
        return (1.0 / (d * root - root + 1.0),
                '1/(d*beta^(1/b) - beta^(1/b) + 1)')
    if tag in (RegimeTag.T3_I2, RegimeTag.T3_II):
        return (1.0 - p) / d, '(1-c)/d'
    if tag == RegimeTag.T3_III:
        return ((1.0 - p) / (d * g - (1.0 - p) * (g - 1.0)),
                '(1-c)/(d*gamma - (1-c)*(gamma-1))')
    return 0.0, '0'


def closed_form_dimension(potential: Potential, growth: GrowthRate,
                          d: float) -> DimensionResult:
    """
    dim_H E_phi(Phi) for the regime of (potential, growth). Critical and
    uncovered pairs come back with value None.
    """
    if not d > 1:
        raise DomainError('d must be > 1, got {}.'.format(d))
    regime = classify_regime(potential, growth)
    if not regime.covered:
        return DimensionResult(None, regime, regime.tag.name.lower())
    value, formula = _formula(potential, growth, d, regime.tag)
    return DimensionResult(value, regime, '{}: {}'.format(regime.label,
                                                          formula),
                           bool(regime.tag & RegimeTag.FULL))


class PerturbedDimension(NamedTuple):
    lower: Optional[float]
    upper: Optional[float]
    regime: Regime


def perturbed_dimension(potential: Potential, growth: GrowthRate, d: float,
                        delta: float) -> PerturbedDimension:
    """
    The formula at d + delta and d - delta, for systems whose branch
    derivatives are only known to decay like i^{-d +- delta}.
    """
    if delta < 0 or not d - delta > 1:
        raise DomainError('Need 0 <= delta < d - 1, got {}.'.format(delta))
    lower = closed_form_dimension(potential, growth, d + delta)
    upper = closed_form_dimension(potential, growth, d - delta)
    return PerturbedDimension(lower.value, upper.value, lower.regime)


class LiminfEstimate(NamedTuple):
    partials: np.ndarray
    estimate: float

    @property
    def last(self) -> float:
        return float(self.partials[-1])


def lemA_liminf(schedule: 'DigitSchedule', d: float,
                n_max: int) -> LiminfEstimate:
    """
    The partial ratios

        q_n = sum_{i<=n} log t_i / (d sum_{i<=n+1} log s_i - log t_{n+1})

    for n = 1..n_max, with the minimum over the last half as the liminf
    estimate. In the numerator log t_i <= 0 counts as 0; the subtracted
    log t_{n+1} is taken as it is.
    """
    if not d > 1:
        raise DomainError('d must be > 1, got {}.'.format(d))
    if n_max < 4:
        raise DomainError('n_max must be >= 4, got {}.'.format(n_max))
    log_s, log_t = schedule.log_window(np.arange(1, n_max + 2))
    if not (np.all(np.isfinite(log_s)) and
            np.all(np.isfinite(log_t) | (log_t == -np.inf))):
        raise DomainError('{} is not finite up to n = {}.'.format(
            schedule.label, n_max + 1))
    numerator = np.cumsum(np.maximum(log_t, 0.0))[:n_max]
    denominator = d * np.cumsum(log_s)[1:] - log_t[1:]
    partials = np.divide(numerator, denominator,
                         out=np.zeros_like(numerator),
                         where=denominator > 0)
    estimate = float(partials[n_max // 2:].min())
    logger.debug('%s: q_%d = %.9g, tail min %.9g', schedule.label, n_max,
                 partials[-1], estimate)
    return LiminfEstimate(partials, estimate)


class MoranResult(NamedTuple):
    root: float
    lower: float
    upper: float


def _moran_root(log_lengths: np.ndarray, tol: float) -> float:
    def pressure(s):
        return logsumexp(s * log_lengths)

    low, high = 0.0, 1.0
    f_low, f_high = pressure(low), pressure(high)
    if f_high >= 0:
        # no contraction in total: the root sits at or beyond 1
        return 1.0
    if not f_low > 0:
        raise BracketError('Moran pressure has no sign change on [0, 1].',
                           f_low, f_high)
    return float(optimize.bisect(pressure, low, high, xtol=tol))


def moran_dimension(system: IfsSystem, M: int,
                    tol: float = 1e-12) -> MoranResult:
    """
    The root s(M) of sum_{i<=M} p_i^s = 1. For the mirrored system only
    bounds are available: the roots of the same equation with xi_i and
    with lambda_i.
    """
    if M < 2:
        raise DomainError(
            'M = {} leaves a single branch; s(M) is degenerate.'.format(M))
    indices = np.arange(1, M + 1)
    if system.is_affine:
        root = _moran_root(system.log_branch_length(indices), tol)
        return MoranResult(root, root, root)
    bounds = np.log(np.array([branch_bounds(system, i) for i in indices]))
    lower = _moran_root(bounds[:, 0], tol)
    upper = _moran_root(bounds[:, 1], tol)
    return MoranResult(lower, lower, upper)


def lemdim1_lower_bound(system: IfsSystem, M: int,
                        tol: float = 1e-12) -> float:
    """
    max(0, 2 s(M) - 1), a lower bound for the dimension of E_M.
    """
    return max(0.0, 2.0 * moran_dimension(system, M, tol).lower - 1.0)
