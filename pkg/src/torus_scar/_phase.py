import numpy as np


def e(x):
    """exp(2 pi i x), reducing x mod 1 before the trig call."""
    x = np.asarray(x, dtype=np.float64)
    return np.exp(2j * np.pi * (x - np.floor(x)))


def e_ratio(k, m):
    """exp(2 pi i k/m) for integer k, m; k is reduced mod m exactly first."""
    k = np.mod(np.asarray(k, dtype=np.int64), m)
    return np.exp(2j * np.pi * (k / m))


def frac(x):
    x = np.asarray(x, dtype=np.float64)
    r = x - np.floor(x)
    # floor of a tiny negative number can round r up to exactly 1.0
    return np.where(r >= 1.0, 0.0, r)
