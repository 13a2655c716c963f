"""Brute-force reference implementations, used only by tests and acceptance runs.

Nothing here is performance-tuned or part of the public API; each function
restates a definition literally so the fast paths have an independent check.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import WindowExceedsSeries
from .gph import Periodogram
from .series import TimeSeries
from .varplot import BlockVarianceCurve

CovarianceFunction = Callable[[int], float]


def exact_mean_variance(gamma: CovarianceFunction, n: int) -> float:
    """Variance of the n-sample mean from the covariance function:

    (1/n) * (gamma(0) + 2 * sum_{k=1}^{n-1} (1 - k/n) * gamma(k)).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    terms = [(1.0 - k / n) * gamma(k) for k in range(1, n)]
    return (gamma(0) + 2.0 * math.fsum(terms)) / n


def brute_force_dft_periodogram(x: TimeSeries) -> Periodogram:
    """Literal O(n^2) evaluation of the defining sum; intended for n <= 2048."""
    v = x.values
    n = v.size
    if n < 2:
        raise ValueError("periodogram needs at least 2 samples")
    count = (n - 1) // 2
    times = np.arange(1, n + 1)
    ordinates = np.empty(count)
    for j in range(1, count + 1):
        lam = 2.0 * np.pi * j / n
        transform = np.sum(v * np.exp(-1j * lam * times))
        ordinates[j - 1] = abs(transform) ** 2 / (2.0 * np.pi * n)
    return Periodogram(
        frequencies=2.0 * np.pi * np.arange(1, count + 1) / n,
        ordinates=ordinates,
        n=n,
    )


def naive_block_variances(x: TimeSeries, n1: int, n2: int) -> BlockVarianceCurve:
    """Quadratic-time restatement of the block-variance definition."""
    if n1 < 1 or n2 < n1:
        raise ValueError(f"need 1 <= n1 <= n2, got ({n1}, {n2})")
    if n2 > x.n:
        raise WindowExceedsSeries(f"n2={n2} exceeds series length {x.n}")
    v = x.values
    out = np.empty(n2 - n1 + 1)
    for i, length in enumerate(range(n1, n2 + 1)):
        means = np.array([v[k : k + length].mean() for k in range(x.n - length + 1)])
        out[i] = ((means - means.mean()) ** 2).mean()
    return BlockVarianceCurve(np.arange(n1, n2 + 1), out)
