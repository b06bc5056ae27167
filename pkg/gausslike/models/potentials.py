# -*- coding: utf-8 -*-
"""
The potential families phi(j) = j^a, e^{(log j)^b}, e^{j^c} and the growth
rates Phi(n) = e^{n^alpha}, e^{beta^n}, e^{e^{gamma^n}}.

Everything is evaluated on logarithms. Digits enter as log j, potentials leave
as log phi(j), and growth rates leave as a LogScaleValue that switches to log
log (or log log log) once the plain logarithm would overflow a double.
"""
import dataclasses
import functools
import logging
import math
from typing import Sequence, Union

import numpy as np
from scipy.special import logsumexp

from ..enums import GrowthKind, PotentialKind, Scale
from ..utils import LOG_FLOAT_MAX, log_sub_exp
from ..warning import DomainError


logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

_POTENTIAL_PREFIX = {
    PotentialKind.POWER_LAW: 'power',
    PotentialKind.LOG_POWER: 'logpower',
    PotentialKind.STRETCHED_EXP: 'stretched'}
_GROWTH_PREFIX = {
    GrowthKind.POLY_EXP: 'polyexp',
    GrowthKind.SUPER_EXP: 'superexp',
    GrowthKind.DOUBLE_EXP: 'doubleexp'}


@dataclasses.dataclass(frozen=True)
class Potential(object):
    """
    Parameters
    ------------
    kind : PotentialKind

    parameter : float
        a > 0 for POWER_LAW, b > 1 for LOG_POWER, c > 0 for STRETCHED_EXP.
    """
    kind: PotentialKind
    parameter: float

    def __post_init__(self) -> None:
        lower = 1.0 if self.kind == PotentialKind.LOG_POWER else 0.0
        if not math.isfinite(self.parameter) or self.parameter <= lower:
            raise DomainError('{} needs a parameter > {}, got {}.'.format(
                self.kind.name, lower, self.parameter))

    @classmethod
    def power_law(cls, a: float) -> 'Potential':
        return cls(PotentialKind.POWER_LAW, float(a))

    @classmethod
    def log_power(cls, b: float) -> 'Potential':
        return cls(PotentialKind.LOG_POWER, float(b))

    @classmethod
    def stretched_exp(cls, c: float) -> 'Potential':
        return cls(PotentialKind.STRETCHED_EXP, float(c))

    @property
    def label(self) -> str:
        return '{}:{:g}'.format(_POTENTIAL_PREFIX[self.kind], self.parameter)

    def __str__(self) -> str:
        return self.label


@dataclasses.dataclass(frozen=True)
class GrowthRate(object):
    """
    Parameters
    ------------
    kind : GrowthKind

    parameter : float
        alpha > 0 for POLY_EXP, beta > 1 for SUPER_EXP, gamma > 1 for
        DOUBLE_EXP.
    """
    kind: GrowthKind
    parameter: float

    def __post_init__(self) -> None:
        lower = 0.0 if self.kind == GrowthKind.POLY_EXP else 1.0
        if not math.isfinite(self.parameter) or self.parameter <= lower:
            raise DomainError('{} needs a parameter > {}, got {}.'.format(
                self.kind.name, lower, self.parameter))

    @classmethod
    def poly_exp(cls, alpha: float) -> 'GrowthRate':
        return cls(GrowthKind.POLY_EXP, float(alpha))

    @classmethod
    def super_exp(cls, beta: float) -> 'GrowthRate':
        return cls(GrowthKind.SUPER_EXP, float(beta))

    @classmethod
    def double_exp(cls, gamma: float) -> 'GrowthRate':
        return cls(GrowthKind.DOUBLE_EXP, float(gamma))

    @property
    def label(self) -> str:
        return '{}:{:g}'.format(_GROWTH_PREFIX[self.kind], self.parameter)

    def __str__(self) -> str:
        return self.label


@functools.total_ordering
@dataclasses.dataclass(frozen=True)
class LogScaleValue(object):
    """
    A positive magnitude x stored as log x (LOG), log log x (LOGLOG) or
    log log log x (LOG3). A higher scale is only used when the lower one
    overflows, so any value at a higher scale is larger than any value at a
    lower one.

    `approximate` marks values where a correction smaller than the float
    resolution at this scale was dropped.
    """
    log_value: float
    scale: Scale = Scale.LOG
    approximate: bool = False

    def _key(self):
        return (int(self.scale), self.log_value)

    def __lt__(self, other: 'LogScaleValue') -> bool:
        if not isinstance(other, LogScaleValue):
            return NotImplemented
        return self._key() < other._key()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogScaleValue):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def at_scale(self, scale: Scale) -> float:
        """
        The stored magnitude re-expressed at `scale`. Going up applies logs;
        going down exponentiates and fails if that overflows.
        """
        value = self.log_value
        current = self.scale
        while current < scale:
            if value <= 0:
                raise DomainError(
                    'log of {} is not positive; cannot move to {}.'.format(
                        value, scale.name))
            value = math.log(value)
            current = Scale(current << 1)
        while current > scale:
            if value >= LOG_FLOAT_MAX:
                raise DomainError('{} at {} does not fit at {}.'.format(
                    self.log_value, self.scale.name, scale.name))
            value = math.exp(value)
            current = Scale(current >> 1)
        return value

    def to_log(self) -> float:
        return self.at_scale(Scale.LOG)


def _check_log_argument(values: np.ndarray, name: str) -> None:
    if np.any(np.isnan(values)) or np.any(values < 0):
        raise DomainError('{} must be >= 0, got {}.'.format(
            name, values[(values < 0) | np.isnan(values)][0]))


def _as_output(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def log_phi(potential: Potential, log_j: ArrayLike):
    """
    log phi(j) from log j. Real-valued j are allowed so that diagnostic
    digits can hit phi exactly.

    Raises
    ------------
    DomainError
        log_j < 0, or log phi(j) itself overflows (use loglog_phi).
    """
    scalar = np.ndim(log_j) == 0
    values = np.asarray(log_j, dtype=np.float64)
    _check_log_argument(values, 'log_j')
    p = potential.parameter
    if potential.kind == PotentialKind.POWER_LAW:
        result = p * values
    elif potential.kind == PotentialKind.LOG_POWER:
        result = values ** p
    else:
        with np.errstate(over='ignore'):
            result = np.exp(p * values)
    if not np.all(np.isfinite(result)):
        raise DomainError(
            'log phi overflows for {}; evaluate loglog_phi instead.'.format(
                potential.label))
    return _as_output(result, scalar)


def loglog_phi(potential: Potential, log_j: ArrayLike):
    """
    log log phi(j). -inf where phi(j) = 1.
    """
    scalar = np.ndim(log_j) == 0
    values = np.asarray(log_j, dtype=np.float64)
    _check_log_argument(values, 'log_j')
    p = potential.parameter
    with np.errstate(divide='ignore'):
        if potential.kind == PotentialKind.POWER_LAW:
            result = math.log(p) + np.log(values)
        elif potential.kind == PotentialKind.LOG_POWER:
            result = p * np.log(values)
        else:
            result = p * values
    return _as_output(result, scalar)


def log_phi_inverse(potential: Potential, log_y: ArrayLike):
    """
    log j for the real solution of phi(j) = y, given log y.
    """
    scalar = np.ndim(log_y) == 0
    values = np.asarray(log_y, dtype=np.float64)
    _check_log_argument(values, 'log_y')
    p = potential.parameter
    if potential.kind == PotentialKind.POWER_LAW:
        result = values / p
    elif potential.kind == PotentialKind.LOG_POWER:
        result = values ** (1.0 / p)
    else:
        if np.any(values == 0):
            raise DomainError(
                'phi(j) = e^(j^c) > 1 for j > 0; log_y must be positive.')
        result = np.log(values) / p
    return _as_output(result, scalar)


def log_growth(growth: GrowthRate, n: int) -> LogScaleValue:
    """
    log Phi(n), at the lowest scale where it is finite.
    """
    if n < 1:
        raise DomainError('Growth rates are indexed from 1, got {}.'.format(n))
    p = growth.parameter
    if growth.kind == GrowthKind.POLY_EXP:
        loglog = p * math.log(n)
    elif growth.kind == GrowthKind.SUPER_EXP:
        loglog = n * math.log(p)
    else:
        # log Phi = e^{gamma^n}, log log Phi = gamma^n
        log3 = n * math.log(p)
        if log3 >= LOG_FLOAT_MAX:
            return LogScaleValue(log3, Scale.LOG3)
        loglog = math.exp(log3)
    if loglog >= LOG_FLOAT_MAX:
        return LogScaleValue(loglog, Scale.LOGLOG)
    return LogScaleValue(math.exp(loglog), Scale.LOG)


def growth_difference_log(growth: GrowthRate, n_hi: int,
                          n_lo: int) -> LogScaleValue:
    """
    log(Phi(n_hi) - Phi(n_lo)) with Phi(0) taken as 0, so that differences
    over consecutive indices telescope to Phi(n).
    """
    if not 0 <= n_lo < n_hi:
        raise DomainError('Need 0 <= n_lo < n_hi, got {} and {}.'.format(
            n_lo, n_hi))
    upper = log_growth(growth, n_hi)
    if n_lo == 0:
        return upper
    lower = log_growth(growth, n_lo)
    if upper.scale == Scale.LOG:
        return LogScaleValue(log_sub_exp(upper.log_value, lower.log_value))
    # Phi(n_lo)/Phi(n_hi) underflows long before log Phi(n_hi) overflows
    logger.debug('%s: increment %d -> %d taken at %s', growth.label, n_lo,
                 n_hi, upper.scale.name)
    return LogScaleValue(upper.log_value, upper.scale, approximate=True)


def growth_increment_log(growth: GrowthRate, n: int) -> LogScaleValue:
    if n < 2:
        raise DomainError('Increments start at n = 2, got {}.'.format(n))
    return growth_difference_log(growth, n, n - 1)


def birkhoff_log_sum(potential: Potential, log_digits: ArrayLike) -> float:
    """
    log S_n phi = log sum_j phi(a_j), by log-sum-exp over log phi(a_j).
    """
    values = np.atleast_1d(np.asarray(log_digits, dtype=np.float64))
    if values.size == 0:
        raise DomainError('Birkhoff sums need at least one digit.')
    return float(logsumexp(log_phi(potential, values)))
