"""Averages and jumps shared by the two-point flux and time-state formulas.

The jump is right-minus-left everywhere: ``jump(a_L, a_R) = a_R - a_L``, and
the same convention serves a time pair ``(a^n, a^{n+1})``.
"""
import numpy as np

# Below this |xi| = |a-b|/(a+b) the logarithmic mean uses its series.
SERIES_SWITCH = 1.0e-4
# Above this |xi|, ln(a/b) is large enough that the plain log ratio is accurate.
LOG_RATIO_SWITCH = 0.5


def arith_mean(a, b):
    return 0.5 * (np.asarray(a, dtype=float) + b)


def jump(a, b):
    return np.asarray(b, dtype=float) - a


def log_mean(a, b):
    """Logarithmic mean ``(a - b)/(ln a - ln b)``, with ``log_mean(x, x) = x``.

    Three branches keep the relative error at a few ulps for every positive
    pair.  With ``xi = (a - b)/(a + b)`` the identity
    ``ln(a/b) = 2 atanh(xi)`` gives

    * ``|xi| < 1e-4``: ``(a + b)/2 / (1 + xi^2/3 + xi^4/5 + xi^6/7)``
    * ``|xi| <= 0.5``: ``(a + b) xi / (2 atanh(xi))``
    * otherwise:       ``(a - b) / ln(a/b)``

    Arguments are sorted first so the result is bitwise symmetric, and it is
    clipped into ``[min(a, b), max(a, b)]`` so round-off cannot push it
    outside the mathematically guaranteed bracket.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a > 0.0)) or np.any(~(b > 0.0)):
        raise ValueError("log_mean requires strictly positive arguments")
    a, b = np.maximum(a, b), np.minimum(a, b)
    s = a + b
    d = a - b
    xi = d / s
    f = xi * xi
    ax = np.abs(xi)
    series = 0.5 * s / (1.0 + f * (1.0 / 3.0 + f * (1.0 / 5.0 + f / 7.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        mid = s * xi / (2.0 * np.arctanh(xi))
        far = d / np.log(a / b)
    out = np.where(ax < SERIES_SWITCH, series, np.where(ax <= LOG_RATIO_SWITCH, mid, far))
    return np.clip(out, b, a)
