"""Time-domain variance-plot estimator with the consistency-guaranteeing window rule."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateBlockVariance,
    OutOfRangeTheta,
    WindowExceedsSeries,
)
from .series import RegressionFit, TimeSeries, ols_slope


@dataclass(frozen=True)
class VariancePlotConfig:
    """Observation window for the variance plot.

    Either give the window explicitly as (n1, n2), or give (delta, m) to be
    resolved against a concrete series length n as n1 = floor(n^delta),
    n2 = ceil(m * n^delta).  The slope is consistent whenever delta stays
    below ``admissible_delta_bound`` of the true slope and m > 1.
    """

    n1: int | None = None
    n2: int | None = None
    delta: float | None = None
    m: float | None = None

    def __post_init__(self):
        explicit = self.n1 is not None or self.n2 is not None
        scaled = self.delta is not None or self.m is not None
        if explicit == scaled:
            raise ValueError("give exactly one of (n1, n2) or (delta, m)")
        if explicit:
            if self.n1 is None or self.n2 is None:
                raise ValueError("both n1 and n2 are required")
            if self.n1 < 1 or self.n2 <= self.n1:
                raise ValueError(f"need 1 <= n1 < n2, got ({self.n1}, {self.n2})")
        else:
            if self.delta is None or self.m is None:
                raise ValueError("both delta and m are required")
            if not 0.0 < self.delta < 1.0:
                raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
            if not self.m > 1.0:
                raise ValueError(f"m must exceed 1, got {self.m}")

    def resolve(self, n: int) -> tuple[int, int]:
        """Concrete (n1, n2) for a series of length n; 1 <= n1 < n2 <= n."""
        if self.n1 is not None:
            if self.n2 > n:
                raise WindowExceedsSeries(f"n2={self.n2} exceeds series length {n}")
            return self.n1, self.n2
        root = n**self.delta
        low = max(1, math.floor(root))
        high = math.ceil(self.m * root)
        if high > n:
            warnings.warn(
                f"window upper end {high} clamped to series length {n}",
                RuntimeWarning,
                stacklevel=2,
            )
            high = n
        if high - low + 1 < 2:
            raise WindowExceedsSeries(
                f"resolved window [{low}, {high}] has fewer than 2 block lengths"
            )
        return low, high


@dataclass(frozen=True)
class BlockVarianceCurve:
    """Variances of overlapping block means, indexed by block length."""

    lengths: np.ndarray
    s2: np.ndarray

    def __post_init__(self):
        lengths = np.asarray(self.lengths, dtype=np.int64)
        s2 = np.asarray(self.s2, dtype=np.float64)
        if lengths.size != s2.size or lengths.size < 1:
            raise ValueError("lengths and s2 must be nonempty and equally long")
        if not np.all(np.isfinite(s2)) or np.any(s2 < 0):
            raise ValueError("block variances must be finite and nonnegative")
        lengths.setflags(write=False)
        s2.setflags(write=False)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "s2", s2)

    @property
    def zero_lengths(self) -> np.ndarray:
        """Block lengths whose variance is exactly zero (log undefined there)."""
        return self.lengths[self.s2 == 0.0]


def block_mean_variances(x: TimeSeries, n1: int, n2: int) -> BlockVarianceCurve:
    """Variance of overlapping block means for every block length l in [n1, n2].

    For each l the n - l + 1 overlapping blocks (x(k), ..., x(k+l-1)) are
    averaged and their population variance around the mean of all block means
    is returned.  A single prefix-sum pass over the centered series makes each
    length O(n); centering costs nothing (the statistic is shift-invariant)
    and keeps the prefix sums from growing.
    """
    if n1 < 1 or n2 < n1:
        raise ValueError(f"need 1 <= n1 <= n2, got ({n1}, {n2})")
    if n2 > x.n:
        raise WindowExceedsSeries(f"n2={n2} exceeds series length {x.n}")
    centered = x.values - math.fsum(x.values) / x.n
    prefix = np.concatenate([[0.0], np.cumsum(centered)])
    out = np.empty(n2 - n1 + 1)
    for i, length in enumerate(range(n1, n2 + 1)):
        means = (prefix[length:] - prefix[:-length]) / length
        deviations = means - means.mean()
        out[i] = (deviations @ deviations) / means.size
    return BlockVarianceCurve(np.arange(n1, n2 + 1), out)


def curve_slope(curve: BlockVarianceCurve) -> RegressionFit:
    """Least-squares slope of log variance against log block length."""
    if curve.zero_lengths.size:
        raise DegenerateBlockVariance(
            f"zero block variance at lengths {curve.zero_lengths.tolist()}"
        )
    return ols_slope(np.log(curve.lengths), np.log(curve.s2))


def variance_plot_slope(x: TimeSeries, cfg: VariancePlotConfig) -> RegressionFit:
    """Slope of the variance plot over the configured window.

    The slope estimates 2D - 1, where D is the memory parameter governing the
    decay of the sample mean's variance.
    """
    n1, n2 = cfg.resolve(x.n)
    return curve_slope(block_mean_variances(x, n1, n2))


def admissible_delta_bound(theta: float) -> float:
    """Upper bound on the window exponent delta that guarantees consistency.

    For a true slope theta in (-2, 0) the bound is
    min(2|theta| / (4|theta| + 1), |theta| / (|theta| + max(|theta|-1, 0) + 1)).
    """
    if not -2.0 < theta < 0.0:
        raise OutOfRangeTheta(f"theta must lie in (-2, 0), got {theta}")
    t = abs(theta)
    return min(2.0 * t / (4.0 * t + 1.0), t / (t + max(t - 1.0, 0.0) + 1.0))


def classify_lrd_variance(fit: RegressionFit) -> str:
    """"LRD" when the variance-plot slope exceeds -1, else "non-LRD"."""
    return "LRD" if fit.slope > -1.0 else "non-LRD"


def write_curve_csv(curve: BlockVarianceCurve, path) -> Path:
    """Two-column CSV (l, s2) for external variance-plot figures."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "s2"])
        for length, value in zip(curve.lengths, curve.s2):
            writer.writerow([int(length), repr(float(value))])
    return path
