# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from gausslike.utils import log1mexp, log_sub_exp


class TestLogHelpers(object):
    @pytest.mark.parametrize('x', [1e-20, 1e-3, math.log(2.0), 5.0, 800.0])
    def test_log1mexp(self, x):
        expected = math.log(-math.expm1(-x))
        assert log1mexp(x) == pytest.approx(expected, rel=1e-12, abs=1e-300)

    def test_log_sub_exp(self):
        assert log_sub_exp(math.log(5.0), math.log(3.0)) == pytest.approx(
            math.log(2.0))
        assert log_sub_exp(2.0, -np.inf) == 2.0
        assert log_sub_exp(2.0, 2.0) == -np.inf
        # far beyond the float range
        assert log_sub_exp(1e6, 1e6 - 1) == pytest.approx(
            1e6 + math.log(-math.expm1(-1.0)))

    def test_arrays(self):
        result = log_sub_exp(np.array([1.0, 3.0]), np.array([0.0, 0.0]))
        assert result.shape == (2,)
