"""Monte Carlo classification benchmark over cutoff grids, with ranked metric tables.

One study simulates ``replications`` series per Hurst value, classifies every
series with both estimators at every configured cutoff pair, and tallies
confusion counts against the known ground truth.  Everything downstream of
the resolved configuration is deterministic, including across worker counts.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .excursion import QuantileMeasure, draw_levels, resolve_quantiles, transform_series
from .fgn import FgnParams, SubordinationParams, simulate_fgn, subordinate
from .gph import full_ordinates
from .series import TimeSeries
from .varplot import block_mean_variances

SCENARIOS = ("fgn", "subordinated-fgn")

_SCENARIO_CODE = {"fgn": 0, "subordinated-fgn": 1}
_LEVELS_STREAM = 2  # entropy tag separating the level panel from path seeds

# Metric CSV columns, fixed so study outputs are machine-comparable.
CSV_COLUMNS = (
    "estimator",
    "n1",
    "n2",
    "tp",
    "fp",
    "tn",
    "fn",
    "skips",
    "accuracy",
    "sensitivity",
    "specificity",
)


def ground_truth_label(scenario: str, hurst: float) -> str:
    """True memory class of a simulated series.

    Plain fGN is long-range dependent iff H > 1/2; the subordinated process
    is long-range dependent (in the excursion-indicator sense) iff H >= 3/4.
    """
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    if not 0.0 < hurst < 1.0:
        raise ConfigError(f"hurst must lie in (0, 1), got {hurst}")
    if scenario == "fgn":
        return "LRD" if hurst > 0.5 else "non-LRD"
    return "LRD" if hurst >= 0.75 else "non-LRD"


def default_hurst_grid(scenario: str) -> tuple[float, ...]:
    """Twelve equidistant Hurst values straddling the scenario's threshold.

    The grids span [0.3, 0.7] (fgn) and [0.6, 0.9] (subordinated-fgn); with
    an even count symmetric around the midpoint, the threshold itself never
    appears, so every grid point has an unambiguous ground truth.
    """
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    if scenario == "fgn":
        return tuple(np.linspace(0.3, 0.7, 12))
    return tuple(np.linspace(0.6, 0.9, 12))


def default_variance_grid(n: int) -> list[tuple[int, int]]:
    """All windows 1 <= n1 < n2 <= min(60, n); larger windows rank poorly."""
    top = min(60, n)
    return [(a, b) for a in range(1, top) for b in range(a + 1, top + 1)]


def default_gph_grid(n: int, points: int = 50) -> list[tuple[int, int]]:
    """Frequency windows 1 <= l < w <= n - 1, subsampled on a stride so the
    grid stays near ``points`` values per endpoint."""
    stride = max(1, (n - 1) // points)
    marks = list(range(1, n, stride))
    return [(marks[i], marks[j]) for i in range(len(marks)) for j in range(i + 1, len(marks))]


def replication_seed(master_seed: int, scenario: str, h_index: int, rep_index: int) -> int:
    """Path seed hashed from (master seed, scenario, Hurst index, replication).

    Hashing instead of streaming keeps existing draws fixed when a grid is
    resized or extended.
    """
    entropy = (int(master_seed), _SCENARIO_CODE[scenario], int(h_index), int(rep_index))
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _derived_level_seed(master_seed: int) -> int:
    entropy = (int(master_seed), _LEVELS_STREAM)
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class StudyConfig:
    """Complete description of one study run; a fixed config fixes the output."""

    scenario: str
    lengths: tuple[int, ...]
    replications: int
    master_seed: int
    hurst_grid: tuple[float, ...] | None = None
    variance_cutoffs: tuple[tuple[int, int], ...] | None = None
    gph_cutoffs: tuple[tuple[int, int], ...] | None = None
    psi: int = 100
    level_seed: int | None = None
    alpha: float = 1.0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(n) for n in self.lengths))
        if self.hurst_grid is not None:
            object.__setattr__(self, "hurst_grid", tuple(float(h) for h in self.hurst_grid))
        for name in ("variance_cutoffs", "gph_cutoffs"):
            pairs = getattr(self, name)
            if pairs is not None:
                object.__setattr__(
                    self, name, tuple((int(a), int(b)) for a, b in pairs)
                )

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if not self.lengths or any(n < 4 for n in self.lengths):
            raise ConfigError("lengths must be a nonempty list of integers >= 4")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.psi < 1:
            raise ConfigError("psi must be >= 1")
        if not self.alpha > 0:
            raise ConfigError("alpha must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        grid = self.hurst_grid if self.hurst_grid is not None else default_hurst_grid(self.scenario)
        if not grid or any(not 0.0 < h < 1.0 for h in grid):
            raise ConfigError("hurst grid values must lie strictly in (0, 1)")
        for name in ("variance_cutoffs", "gph_cutoffs"):
            pairs = getattr(self, name)
            if pairs is not None and len(pairs) == 0:
                raise ConfigError(f"{name} must be nonempty when given")
        for n in self.lengths:
            if self.variance_cutoffs is not None:
                for a, b in self.variance_cutoffs:
                    if not 1 <= a < b <= n:
                        raise ConfigError(
                            f"variance cutoff ({a}, {b}) invalid for length {n}"
                        )
            if self.gph_cutoffs is not None:
                for a, b in self.gph_cutoffs:
                    if not 1 <= a < b <= n - 1:
                        raise ConfigError(f"gph cutoff ({a}, {b}) invalid for length {n}")

    def resolved_level_seed(self) -> int:
        if self.level_seed is not None:
            return int(self.level_seed)
        return _derived_level_seed(self.master_seed)

    def resolved_hurst_grid(self) -> tuple[float, ...]:
        if self.hurst_grid is not None:
            return self.hurst_grid
        return default_hurst_grid(self.scenario)

    def grids_for(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        var = self.variance_cutoffs or default_variance_grid(n)
        gph = self.gph_cutoffs or default_gph_grid(n)
        return (
            np.asarray(var, dtype=np.int64).reshape(-1, 2),
            np.asarray(gph, dtype=np.int64).reshape(-1, 2),
        )

    def manifest_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "lengths": list(self.lengths),
            "replications": self.replications,
            "master_seed": self.master_seed,
            "hurst_grid": [float(h) for h in self.resolved_hurst_grid()],
            "psi": self.psi,
            "level_seed": self.resolved_level_seed(),
            "alpha": self.alpha,
            "workers": self.workers,
            "variance_cutoffs": {
                str(n): [list(p) for p in self.grids_for(n)[0].tolist()] for n in self.lengths
            },
            "gph_cutoffs": {
                str(n): [list(p) for p in self.grids_for(n)[1].tolist()] for n in self.lengths
            },
        }


@dataclass(frozen=True)
class MetricsReport:
    """Confusion counts and derived metrics for one (estimator, cutoff, length)."""

    estimator: str
    n1: int
    n2: int
    series_length: int
    tp: int
    fp: int
    tn: int
    fn: int
    skips: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total if self.total else math.nan

    @property
    def sensitivity(self) -> float:
        positives = self.tp + self.fn
        return self.tp / positives if positives else math.nan

    @property
    def specificity(self) -> float:
        negatives = self.tn + self.fp
        return self.tn / negatives if negatives else math.nan


def _prefix(values: np.ndarray) -> np.ndarray:
    out = np.empty(values.size + 1)
    out[0] = 0.0
    np.cumsum(values, out=out[1:])
    return out


def _window_slopes(
    xs: np.ndarray, ys: np.ndarray, bad: np.ndarray, windows: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """OLS slopes of ys on xs over many inclusive index windows at once.

    ``windows`` holds (start, stop) positions into the value arrays.  Entries
    flagged ``bad`` poison every window containing them (second return value
    False there).  Matches ``ols_slope`` to ~1e-10 relative; any window for
    which that difference could flip a classification would have its slope
    exactly on the decision threshold, which has probability zero for
    continuous data.
    """
    px = _prefix(xs)
    pxx = _prefix(xs * xs)
    py = _prefix(ys)
    pxy = _prefix(xs * ys)
    pbad = _prefix(bad.astype(np.float64))
    a = windows[:, 0]
    b = windows[:, 1] + 1
    count = (b - a).astype(np.float64)
    sx = px[b] - px[a]
    sy = py[b] - py[a]
    sxx = pxx[b] - pxx[a]
    sxy = pxy[b] - pxy[a]
    denom = sxx - sx * sx / count
    with np.errstate(invalid="ignore", divide="ignore"):
        slopes = (sxy - sx * sy / count) / denom
    ok = (pbad[b] - pbad[a]) == 0.0
    return slopes, ok


def _variance_labels(series: TimeSeries, grid: np.ndarray) -> np.ndarray:
    """Classification per variance window: 1 = LRD, 0 = non-LRD, 2 = skip."""
    lmin = int(grid[:, 0].min())
    lmax = int(grid[:, 1].max())
    curve = block_mean_variances(series, lmin, lmax)
    bad = curve.s2 == 0.0
    logs2 = np.log(np.where(bad, 1.0, curve.s2))
    logl = np.log(curve.lengths.astype(np.float64))
    slopes, ok = _window_slopes(logl, logs2, bad, grid - lmin)
    labels = np.where(slopes > -1.0, 1, 0).astype(np.int8)
    labels[~ok] = 2
    return labels


def _gph_labels(series: TimeSeries, grid: np.ndarray, ordinates: np.ndarray) -> np.ndarray:
    """Classification per frequency window: 1 = LRD, 0 = non-LRD, 2 = skip."""
    n = series.n
    indices = np.arange(1, n)
    bad = ordinates[1:] == 0.0
    logi = np.log(np.where(bad, 1.0, ordinates[1:]))
    regressors = -2.0 * np.log(2.0 * np.pi * indices / n)
    slopes, ok = _window_slopes(regressors, logi, bad, grid - 1)
    labels = np.where(slopes > 0.0, 1, 0).astype(np.int8)
    labels[~ok] = 2
    return labels


def _study_series(cfg: StudyConfig, levels: QuantileMeasure | None, n: int, h_index: int, rep: int) -> TimeSeries:
    hurst = cfg.resolved_hurst_grid()[h_index]
    seed = replication_seed(cfg.master_seed, cfg.scenario, h_index, rep)
    path = simulate_fgn(FgnParams(hurst=hurst, n=n), seed)
    if cfg.scenario == "fgn":
        return path
    heavy = subordinate(path, SubordinationParams(cfg.alpha))
    return transform_series(heavy, resolve_quantiles(heavy, levels))


def _evaluate_item(
    cfg: StudyConfig,
    levels: QuantileMeasure | None,
    n: int,
    var_grid: np.ndarray,
    gph_grid: np.ndarray,
    item: tuple[int, int],
) -> tuple[np.ndarray, np.ndarray]:
    h_index, rep = item
    series = _study_series(cfg, levels, n, h_index, rep)
    return (
        _variance_labels(series, var_grid),
        _gph_labels(series, gph_grid, full_ordinates(series)),
    )


def run_study(cfg: StudyConfig) -> list[MetricsReport]:
    """Run the full grid and return one report per (estimator, cutoff, length).

    Replications are independent work items; with ``cfg.workers > 1`` they are
    distributed over a process pool and merged in work-item order, so output
    is identical for every worker count.
    """
    cfg.validate()
    hurst_grid = cfg.resolved_hurst_grid()
    levels = None
    if cfg.scenario == "subordinated-fgn":
        levels = draw_levels(cfg.psi, cfg.resolved_level_seed())

    truths = np.array(
        [ground_truth_label(cfg.scenario, h) == "LRD" for h in hurst_grid], dtype=bool
    )
    reports: list[MetricsReport] = []
    for n in cfg.lengths:
        var_grid, gph_grid = cfg.grids_for(n)
        items = [(h, r) for h in range(len(hurst_grid)) for r in range(cfg.replications)]
        evaluate = partial(_evaluate_item, cfg, levels, n, var_grid, gph_grid)
        # counts[estimator][pair, truth, label]
        var_counts = np.zeros((var_grid.shape[0], 2, 3), dtype=np.int64)
        gph_counts = np.zeros((gph_grid.shape[0], 2, 3), dtype=np.int64)
        if cfg.workers > 1:
            chunk = max(1, len(items) // (cfg.workers * 8))
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                results = pool.map(evaluate, items, chunksize=chunk)
                for (h_index, _), (var_labels, gph_labels) in zip(items, results):
                    truth = int(truths[h_index])
                    np.add.at(var_counts[:, truth, :], (np.arange(var_grid.shape[0]), var_labels), 1)
                    np.add.at(gph_counts[:, truth, :], (np.arange(gph_grid.shape[0]), gph_labels), 1)
        else:
            for item in items:
                var_labels, gph_labels = evaluate(item)
                truth = int(truths[item[0]])
                np.add.at(var_counts[:, truth, :], (np.arange(var_grid.shape[0]), var_labels), 1)
                np.add.at(gph_counts[:, truth, :], (np.arange(gph_grid.shape[0]), gph_labels), 1)

        for estimator, grid, counts in (
            ("variance", var_grid, var_counts),
            ("gph", gph_grid, gph_counts),
        ):
            for idx in range(grid.shape[0]):
                reports.append(
                    MetricsReport(
                        estimator=estimator,
                        n1=int(grid[idx, 0]),
                        n2=int(grid[idx, 1]),
                        series_length=n,
                        tp=int(counts[idx, 1, 1]),
                        fp=int(counts[idx, 0, 1]),
                        tn=int(counts[idx, 0, 0]),
                        fn=int(counts[idx, 1, 0]),
                        skips=int(counts[idx, 0, 2] + counts[idx, 1, 2]),
                    )
                )
    return reports


def rank_cutoffs(reports: list[MetricsReport], k: int) -> list[MetricsReport]:
    """Top-k reports by accuracy.

    Ties break deterministically by higher sensitivity, then narrower window,
    then smaller lower cutoff, then estimator name and length.
    """
    if not reports:
        raise ValueError("no reports to rank")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    def key(r: MetricsReport):
        accuracy = -1.0 if math.isnan(r.accuracy) else r.accuracy
        sensitivity = -1.0 if math.isnan(r.sensitivity) else r.sensitivity
        return (-accuracy, -sensitivity, r.n2 - r.n1, r.n1, r.estimator, r.series_length)

    return sorted(reports, key=key)[:k]


def _format_metric(value: float) -> str:
    return "nan" if math.isnan(value) else f"{value:.6f}"


def write_study_outputs(cfg: StudyConfig, reports: list[MetricsReport], out_dir) -> list[Path]:
    """One metrics CSV per series length plus a JSON manifest of the resolved config."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for n in cfg.lengths:
        rows = sorted(
            (r for r in reports if r.series_length == n),
            key=lambda r: (r.estimator, r.n1, r.n2),
        )
        path = out_dir / f"results_{cfg.scenario}_n{n}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                writer.writerow(
                    [
                        r.estimator,
                        r.n1,
                        r.n2,
                        r.tp,
                        r.fp,
                        r.tn,
                        r.fn,
                        r.skips,
                        _format_metric(r.accuracy),
                        _format_metric(r.sensitivity),
                        _format_metric(r.specificity),
                    ]
                )
        written.append(path)
    manifest = out_dir / f"manifest_{cfg.scenario}.json"
    manifest.write_text(json.dumps(cfg.manifest_dict(), sort_keys=True, indent=2) + "\n")
    written.append(manifest)
    return written


def read_report_csv(path) -> list[MetricsReport]:
    """Read back a study metrics CSV; series length is parsed from the name."""
    path = Path(path)
    length = 0
    stem = path.stem
    if "_n" in stem:
        tail = stem.rsplit("_n", 1)[1]
        if tail.isdigit():
            length = int(tail)
    reports = []
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            reports.append(
                MetricsReport(
                    estimator=row["estimator"],
                    n1=int(row["n1"]),
                    n2=int(row["n2"]),
                    series_length=length,
                    tp=int(row["tp"]),
                    fp=int(row["fp"]),
                    tn=int(row["tn"]),
                    fn=int(row["fn"]),
                    skips=int(row["skips"]),
                )
            )
    return reports
