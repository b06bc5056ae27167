# -*- coding: utf-8 -*-
"""
counting.py
    Truncated zeta values with a certified remainder, the tuple sets of the
    counting lemmas (power-law and log-power weights), the weighted sums G and
    Ĝ over them, and the closed-form bounds with their validity windows.


covering.py
    Numerical dimension estimators that do not go through the liminf formula:
    covering sums over schedule-constrained cylinders, their roots in s,
    local-dimension profiles of the uniform schedule measure and the
    product-of-G cover bounds used for the I-2a upper bounds.


dim_formulas.py
    Regime classification and the closed-form dimensions for the four
    potential families, the liminf formula for B(s_n, t_n, N) sets, and the
    Moran root s(M) of the affine model.


enums.py
    Enumerations used throughout the package: system, potential and growth
    kinds, regime tags, verdicts.


input_output.py
    CSV report writer with '#' metadata, the flat key=value config reader and
    the schedule table format.


main.py
    Command-line front end. Subcommands dimension, sweep, verify, sample,
    counting and root, all emitting deterministic CSV.


models
    ifs_core.py holds the concrete d-decaying Gauss-like systems, words and
    cylinder intervals; potentials.py holds the potential and growth-rate
    families evaluated in log scale.


registry.py
    Ordered in-memory store for result rows, so that rows computed out of
    order (e.g. by a thread pool) are written in grid order.


schedules.py
    Digit schedules: the B(s_n, t_n, N) constructions for every theorem case,
    the E_M schedules, seeded sampling and convergence diagnostics.


utils.py
    Dataclass to JSON conversion and a handful of log-scale helpers.


verification.py
    Property suites behind the `verify` subcommand.


warning.py
    The package's exception hierarchy and warning categories. Failed checks
    are reported, not raised; exceptions mean the input was unusable.
"""
import os
from typing import Any, Iterable, NamedTuple, Tuple


class Version(NamedTuple):
    """
    Software version.
    """
    major: int
    minor: int
    micro: int

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, str):
            try:
                other_parts: Iterable[int] = tuple(map(int, other.split('.')))
            except ValueError:
                return False
        elif isinstance(other, tuple):
            other_parts = tuple(other)
        else:
            return False
        return tuple(self) == other_parts

    def __ne__(self, other: Any) -> bool:
        return not self == other

    def __hash__(self) -> int:
        return hash(tuple(self))

    def __str__(self) -> str:
        return '{}.{}.{}'.format(self.major, self.minor, self.micro)

    def __repr__(self) -> str:
        return 'gausslike.Version (major={}, minor={}, micro={})'.format(
            self.major, self.minor, self.micro)


ROOT_DIR: str = os.path.abspath(os.path.dirname(__file__))
VERSION: Version = Version(major=0, minor=1, micro=0)

# digits at or above this bound are only handled at log scale
MATERIALIZATION_LIMIT: int = 2 ** 40
# certified error of every zeta value used for normalization
ZETA_TOLERANCE: float = 1e-12
# nodes visited by a tuple enumeration before giving up
ENUMERATION_CAP: int = 10 ** 8
# digit windows with upper end below this are summed term by term
EXACT_WINDOW_LIMIT: int = 10 ** 6
ROOT_BRACKET: Tuple[float, float] = (0.01, 1.5)
CSV_SIGNIFICANT_DIGITS: int = 12
# eps_n = n ** -rate for lower-bound schedules
DEFAULT_EPSILON_RATE: float = 2.0
OUTPUT_DIR_ENV: str = 'GAUSSLIKE_OUTPUT_DIR'
