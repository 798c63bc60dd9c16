import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecfv import arith_mean, jump, log_mean
from ecfv.means import SERIES_SWITCH

mpmath.mp.dps = 50
positive = st.floats(1e-6, 1e6)


def log_mean_oracle(a, b):
    a, b = mpmath.mpf(a), mpmath.mpf(b)
    if a == b:
        return a
    return (a - b) / (mpmath.log(a) - mpmath.log(b))


def test_arith_mean_examples():
    assert arith_mean(1.0, 3.0) == 2.0
    assert arith_mean(0.7, 0.7) == 0.7
    assert arith_mean(0.2, 5.0) == arith_mean(5.0, 0.2)


def test_jump_examples():
    assert jump(1.0, 3.0) == 2.0
    assert jump(0.3, 0.3) == 0.0
    assert jump(0.2, 5.0) == -jump(5.0, 0.2)


def test_log_mean_examples():
    assert log_mean(2.5, 2.5) == 2.5
    assert log_mean(1.0, math.e) == pytest.approx(math.e - 1.0, rel=1e-15)


def test_log_mean_rejects_nonpositive():
    with pytest.raises(ValueError):
        log_mean(0.0, 1.0)
    with pytest.raises(ValueError):
        log_mean(np.array([1.0, -2.0]), np.array([1.0, 1.0]))


@pytest.mark.parametrize("sep", [10.0 ** -k for k in range(1, 16)])
@pytest.mark.parametrize("base", [1e-3, 1.0, 7.3, 1e4])
def test_log_mean_against_high_precision(base, sep):
    a, b = base, base * (1.0 + sep)
    exact = log_mean_oracle(a, b)
    assert abs(mpmath.mpf(float(log_mean(a, b))) - exact) / exact <= 1e-14


def test_log_mean_continuous_across_series_switch():
    # xi = (a - b)/(a + b) straddling the switch
    xs = SERIES_SWITCH * np.array([0.999, 0.9999, 1.0, 1.0001, 1.001])
    b = 1.0
    a = b * (1 + xs) / (1 - xs)
    for ai in a:
        exact = log_mean_oracle(ai, b)
        assert abs(mpmath.mpf(float(log_mean(ai, b))) - exact) / exact <= 1e-15


def test_log_mean_vectorised_matches_scalar(rng):
    a = rng.uniform(0.1, 10, 100)
    b = a * (1 + rng.choice([1e-12, 1e-6, 1e-3, 0.3, 3.0], 100))
    vec = log_mean(a, b)
    for i in range(100):
        assert vec[i] == log_mean(a[i], b[i])


@given(positive, positive)
def test_log_mean_bounds_and_symmetry(a, b):
    m = log_mean(a, b)
    assert min(a, b) <= m <= arith_mean(a, b) * (1 + 1e-15)
    assert m == log_mean(b, a)


@given(positive, positive, st.floats(1e-3, 1e3))
def test_log_mean_scale_covariant(a, b, lam):
    assert log_mean(lam * a, lam * b) == pytest.approx(lam * log_mean(a, b), rel=1e-14)


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_product_rule(a1, a2, b1, b2):
    lhs = jump(a1 * b1, a2 * b2)
    rhs = arith_mean(a1, a2) * jump(b1, b2) + arith_mean(b1, b2) * jump(a1, a2)
    # round-off scale: magnitudes of every term that gets summed
    scale = (abs(a1 * b1) + abs(a2 * b2) + abs(arith_mean(a1, a2) * jump(b1, b2))
             + abs(arith_mean(b1, b2) * jump(a1, a2)))
    assert abs(lhs - rhs) <= 1e-14 * scale


def test_log_rule(rng):
    a = rng.uniform(0.01, 100, 10000)
    sep = 10.0 ** rng.uniform(-8, 0, 10000)
    b = a * (1 + sep)
    # jump of ln taken as log1p of the relative jump: subtracting two rounded
    # logs would lose ~eps/sep relative accuracy and hide log_mean's own error
    dlog = np.log1p(jump(a, b) / a)
    np.testing.assert_allclose(dlog * log_mean(a, b), jump(a, b), rtol=1e-13)
