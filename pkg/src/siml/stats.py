"""One-sample Kolmogorov-Smirnov test against a continuous reference law."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr


@dataclass(frozen=True)
class KsResult:
    statistic: float
    pvalue: float
    n: int


def kolmogorov_sf(x):
    """P(K > x) for the Kolmogorov distribution.

    Uses 2 sum (-1)^(k-1) exp(-2 k^2 x^2) for x >= 1 and the theta-function
    form sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2)) below, each truncated
    once terms drop under 1e-17.
    """
    if x <= 0.0:
        return 1.0
    if x < 1.0:
        total, k = 0.0, 1
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * x * x))
            total += term
            if term < 1e-17 or k > 100:
                break
            k += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / x * total))
    total, k = 0.0, 1
    while True:
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if term < 1e-17 or k > 100:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_statistic(sample, cdf=ndtr):
    """sup |F_n - F| for a 1-D sample."""
    x = np.sort(np.asarray(sample, dtype=np.float64))
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    f = cdf(x)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus))


def ks_test(sample, cdf=ndtr):
    """KS statistic and asymptotic p-value with Stephens' small-sample correction."""
    n = int(np.size(sample))
    d = ks_statistic(sample, cdf)
    rn = math.sqrt(n)
    return KsResult(d, kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d), n)
