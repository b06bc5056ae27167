# -*- coding: utf-8 -*-
"""
Errors mean the caller asked for something that cannot be computed; a check
that merely fails is a report entry (see verification.py), never an
exception. Every error is a ValueError so callers that only know the standard
library still catch them.
"""
from typing import Optional


class GausslikeError(ValueError):
    pass


class DomainError(GausslikeError):
    """
    A parameter lies outside the range where the quantity is defined, e.g.
    d <= 1, a negative log-digit or a branch index of 0.
    """


class MaterializationError(GausslikeError, OverflowError):
    """
    A digit is too large for exact endpoints. The log-scale routines
    (log_cylinder_diameter) still apply.
    """


class AmbiguousExpansionError(GausslikeError):
    """
    The point lies on a cylinder boundary and has two symbolic expansions.
    """


class UncoveredCaseError(GausslikeError):
    """
    No theorem case covers the (potential, growth) pair or the requested
    schedule flavor.
    """


class ConstructionError(GausslikeError):
    """
    A schedule cannot satisfy its own hypotheses. `witness` names the first
    index where it fails.
    """
    def __init__(self, message: str, witness: Optional[int] = None) -> None:
        super().__init__(message)
        self.witness = witness


class EnumerationSizeError(GausslikeError):
    def __init__(self, message: str, estimate: int) -> None:
        super().__init__(message)
        self.estimate = estimate


class BracketError(GausslikeError):
    """
    A root finder was handed an interval without a sign change.
    """
    def __init__(self, message: str, lower_value: float,
                 upper_value: float) -> None:
        super().__init__(message)
        self.lower_value = lower_value
        self.upper_value = upper_value


class WindowUndefinedError(GausslikeError):
    pass


class HypothesisError(GausslikeError):
    """
    The parameters violate the hypothesis of the argument being reproduced.
    """


class ConfigError(GausslikeError):
    """
    Malformed command line or config file. The CLI maps it to exit code 1.
    """


class ApproximationWarning(UserWarning):
    """
    A value was computed at a coarser scale or by an integral approximation.
    """


class PreAsymptoticWarning(UserWarning):
    """
    The computation is fine but the depth is too small for the asymptotic
    statement it is compared with.
    """
