"""Spectral-domain log-periodogram regression at Fourier frequencies."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import WindowExceedsSeries, ZeroPeriodogramOrdinate
from .series import RegressionFit, TimeSeries, ols_slope


@dataclass(frozen=True)
class GphConfig:
    """Frequency window for the log-periodogram regression.

    ``trim`` is the lowest Fourier-frequency index entering the regression
    (trim = 1 means no trimming); ``bandwidth`` is the highest.  Windows may
    extend past the Nyquist index up to n - 1 for grid compatibility: the
    ordinate at index j then aliases the one at n - j while the regressor
    keeps the literal frequency 2*pi*j/n.
    """

    trim: int
    bandwidth: int

    def __post_init__(self):
        if self.trim < 1:
            raise ValueError(f"trim must be >= 1, got {self.trim}")
        if self.bandwidth < self.trim + 1:
            raise ValueError(
                f"bandwidth must exceed trim, got ({self.trim}, {self.bandwidth})"
            )


@dataclass(frozen=True)
class Periodogram:
    """Ordinates I(lambda_j) at the canonical Fourier frequencies 2*pi*j/n,
    j = 1..floor((n-1)/2)."""

    frequencies: np.ndarray
    ordinates: np.ndarray
    n: int

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.float64)
        ords = np.asarray(self.ordinates, dtype=np.float64)
        if freqs.size != ords.size:
            raise ValueError("frequencies and ordinates must be equally long")
        if freqs.size != (self.n - 1) // 2:
            raise ValueError(f"expected {(self.n - 1) // 2} ordinates for n={self.n}")
        if np.any(ords < 0):
            raise ValueError("ordinates must be nonnegative")
        freqs.setflags(write=False)
        ords.setflags(write=False)
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "ordinates", ords)


def full_ordinates(x: TimeSeries) -> np.ndarray:
    """Periodogram ordinates I(2*pi*j/n) for every index j = 0..n-1.

    I(lambda) = |sum_k x(k) e^{-ik*lambda}|^2 / (2*pi*n), computed from one
    real FFT; indices past the Nyquist fold back via I_j = I_{n-j}.
    """
    v = x.values
    n = v.size
    if n < 2:
        raise ValueError("periodogram needs at least 2 samples")
    half = np.abs(np.fft.rfft(v)) ** 2 / (2.0 * np.pi * n)
    out = np.empty(n)
    out[: half.size] = half
    out[half.size :] = half[1 : n - half.size + 1][::-1]
    return out


def periodogram(x: TimeSeries) -> Periodogram:
    """Periodogram at the canonical Fourier frequencies j = 1..floor((n-1)/2)."""
    n = x.n
    ords = full_ordinates(x)
    count = (n - 1) // 2
    return Periodogram(
        frequencies=2.0 * np.pi * np.arange(1, count + 1) / n,
        ordinates=ords[1 : count + 1],
        n=n,
    )


def gph_from_ordinates(ordinates: np.ndarray, n: int, cfg: GphConfig) -> RegressionFit:
    """Log-periodogram regression on precomputed full-grid ordinates.

    Regresses log I(lambda_j) on -2*log(lambda_j) for j = trim..bandwidth;
    the slope estimates the memory parameter d.
    """
    if cfg.bandwidth > n - 1:
        raise WindowExceedsSeries(
            f"bandwidth {cfg.bandwidth} exceeds n - 1 = {n - 1}"
        )
    indices = np.arange(cfg.trim, cfg.bandwidth + 1)
    used = np.asarray(ordinates)[indices]
    if np.any(used == 0.0):
        zero_at = indices[used == 0.0]
        raise ZeroPeriodogramOrdinate(
            f"zero ordinate at frequency indices {zero_at.tolist()}"
        )
    regressors = -2.0 * np.log(2.0 * np.pi * indices / n)
    return ols_slope(regressors, np.log(used))


def gph_estimate(x: TimeSeries, cfg: GphConfig) -> RegressionFit:
    """Trimmed GPH estimate of the memory parameter d for one series."""
    return gph_from_ordinates(full_ordinates(x), x.n, cfg)


def classify_lrd_gph(fit: RegressionFit) -> str:
    """"LRD" when the estimated memory parameter is strictly positive, else "non-LRD"."""
    return "LRD" if fit.slope > 0.0 else "non-LRD"


def write_periodogram_csv(p: Periodogram, path) -> Path:
    """Two-column CSV (lambda, ordinate)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "ordinate"])
        for freq, value in zip(p.frequencies, p.ordinates):
            writer.writerow([repr(float(freq)), repr(float(value))])
    return path
