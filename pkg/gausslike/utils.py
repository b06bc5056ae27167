# -*- coding: utf-8 -*-
import math

import numpy as np


LOG_FLOAT_MAX: float = math.log(np.finfo(np.float64).max)


def log1mexp(x):
    """
    log(1 - e^{-x}) for x > 0, accurate at both ends (Maechler's switch at
    log 2).
    """
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide='ignore'):
        result = np.where(
            x < math.log(2.0),
            np.log(-np.expm1(-np.minimum(x, math.log(2.0)))),
            np.log1p(-np.exp(-np.maximum(x, math.log(2.0)))))
    return result if result.ndim else float(result)


def log_sub_exp(x, y):
    """
    log(e^x - e^y) for x >= y, never forming e^x.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    gap = x - y
    with np.errstate(invalid='ignore'):
        result = np.where(np.isinf(y) & (y < 0), x, x + log1mexp(
            np.where(gap > 0, gap, np.inf)))
    result = np.where(gap == 0, -np.inf, result)
    return result if result.ndim else float(result)
