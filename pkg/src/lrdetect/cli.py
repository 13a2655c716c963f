"""Command-line interface: simulate paths, estimate single series, run and rank studies."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import ConfigError, LrdetectError
from .excursion import draw_levels, resolve_quantiles, transform_series
from .fgn import FgnParams, SubordinationParams, simulate_fgn, subordinate
from .gph import GphConfig, classify_lrd_gph, gph_estimate
from .series import read_series_csv, write_series_csv
from .study import (
    StudyConfig,
    rank_cutoffs,
    read_report_csv,
    replication_seed,
    run_study,
    write_study_outputs,
)
from .varplot import (
    VariancePlotConfig,
    classify_lrd_variance,
    variance_plot_slope,
)


def _cmd_simulate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for rep in range(args.count):
        seed = replication_seed(args.seed, args.scenario, 0, rep)
        series = simulate_fgn(FgnParams(hurst=args.hurst, n=args.length, sigma2=args.sigma2), seed)
        if args.scenario == "subordinated-fgn":
            series = subordinate(series, SubordinationParams(args.alpha))
        name = f"{args.scenario}_h{args.hurst:.4f}_r{rep:03d}.csv"
        path = write_series_csv(series, out_dir / name)
        print(path)
    return 0


def _estimator_config(args):
    if args.estimator == "variance":
        if args.delta is not None or args.m is not None:
            return VariancePlotConfig(delta=args.delta, m=args.m)
        if args.n1 is None or args.n2 is None:
            raise ConfigError("variance estimator needs --n1/--n2 or --delta/--m")
        return VariancePlotConfig(n1=args.n1, n2=args.n2)
    if args.trim is None or args.bandwidth is None:
        raise ConfigError("gph estimator needs --trim and --bandwidth")
    return GphConfig(trim=args.trim, bandwidth=args.bandwidth)


def _cmd_estimate(args) -> int:
    series = read_series_csv(args.input)
    if args.quantile_transform:
        if args.level_seed is None:
            raise ConfigError("--quantile-transform requires --level-seed")
        levels = draw_levels(args.quantile_transform, args.level_seed)
        series = transform_series(series, resolve_quantiles(series, levels))
    cfg = _estimator_config(args)
    if isinstance(cfg, VariancePlotConfig):
        fit = variance_plot_slope(series, cfg)
        n1, n2 = cfg.resolve(series.n)
        print(f"estimator variance window {n1} {n2}")
        print(f"slope {fit.slope:.6f}")
        print(f"label {classify_lrd_variance(fit)}")
    else:
        fit = gph_estimate(series, cfg)
        print(f"estimator gph window {cfg.trim} {cfg.bandwidth}")
        print(f"d {fit.slope:.6f}")
        print(f"label {classify_lrd_gph(fit)}")
    return 0


def _parse_pairs(raw) -> tuple[tuple[int, int], ...]:
    return tuple((int(a), int(b)) for a, b in raw)


def _study_config(args) -> tuple[StudyConfig, Path]:
    file_cfg = {}
    if args.config is not None:
        file_cfg = json.loads(Path(args.config).read_text())

    def pick(flag_value, *keys, default=None):
        if flag_value is not None:
            return flag_value
        for key in keys:
            if key in file_cfg:
                return file_cfg[key]
        return default

    seed = pick(args.seed, "master_seed", "seed")
    scale = pick(args.scale, "scale")
    scenario = pick(args.scenario, "scenario")
    out_dir = pick(args.out_dir, "out_dir")
    workers = pick(args.workers, "workers")
    missing = [
        name
        for name, value in (
            ("seed", seed),
            ("scale", scale),
            ("scenario", scenario),
            ("out-dir", out_dir),
            ("workers", workers),
        )
        if value is None
    ]
    if missing:
        raise ConfigError(f"missing required study settings: {', '.join(missing)}")
    scale = float(scale)
    if not scale > 0:
        raise ConfigError(f"scale must be positive, got {scale}")
    replications = pick(args.replications, "replications", default=round(1000 * scale))
    lengths = pick(args.lengths, "lengths", default=(50, 100, 200, 500))
    if isinstance(lengths, str):
        lengths = [int(tok) for tok in lengths.split(",") if tok.strip()]
    hurst_grid = file_cfg.get("hurst_grid")
    variance_cutoffs = file_cfg.get("variance_cutoffs")
    gph_cutoffs = file_cfg.get("gph_cutoffs")
    cfg = StudyConfig(
        scenario=str(scenario),
        lengths=tuple(lengths),
        replications=int(replications),
        master_seed=int(seed),
        hurst_grid=tuple(hurst_grid) if hurst_grid else None,
        variance_cutoffs=_parse_pairs(variance_cutoffs) if variance_cutoffs else None,
        gph_cutoffs=_parse_pairs(gph_cutoffs) if gph_cutoffs else None,
        psi=int(pick(args.psi, "psi", default=100)),
        level_seed=pick(args.level_seed, "level_seed"),
        alpha=float(pick(args.alpha, "alpha", default=1.0)),
        workers=int(workers),
    )
    cfg.validate()
    return cfg, Path(out_dir)


def _cmd_study(args) -> int:
    cfg, out_dir = _study_config(args)
    reports = run_study(cfg)
    paths = write_study_outputs(cfg, reports, out_dir)
    for path in paths:
        print(path)
    return 0


def _format_percent(value: float) -> str:
    return "   nan" if math.isnan(value) else f"{100 * value:6.2f}"


def _cmd_rank(args) -> int:
    reports = []
    for path in args.results:
        reports.extend(read_report_csv(path))
    if not reports:
        raise ConfigError("no rows found in the given results files")
    top = rank_cutoffs(reports, args.k)
    print(f"{'estimator':<9} {'n':>5} {'n1':>4} {'n2':>4} {'acc%':>6} {'sens%':>6} {'spec%':>6} {'skips':>5}")
    for r in top:
        print(
            f"{r.estimator:<9} {r.series_length:>5} {r.n1:>4} {r.n2:>4} "
            f"{_format_percent(r.accuracy)} {_format_percent(r.sensitivity)} "
            f"{_format_percent(r.specificity)} {r.skips:>5}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrdetect",
        description="Detect long-range dependence and benchmark the detectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="emit raw simulated series as CSV files")
    p_sim.add_argument("--scenario", choices=("fgn", "subordinated-fgn"), required=True)
    p_sim.add_argument("--hurst", type=float, required=True)
    p_sim.add_argument("--length", type=int, required=True)
    p_sim.add_argument("--count", type=int, default=1)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out-dir", required=True)
    p_sim.add_argument("--sigma2", type=float, default=1.0)
    p_sim.add_argument("--alpha", type=float, default=1.0)
    p_sim.set_defaults(func=_cmd_simulate)

    p_est = sub.add_parser("estimate", help="classify one CSV series with one estimator")
    p_est.add_argument("input")
    p_est.add_argument("--estimator", choices=("variance", "gph"), required=True)
    p_est.add_argument("--n1", type=int)
    p_est.add_argument("--n2", type=int)
    p_est.add_argument("--delta", type=float)
    p_est.add_argument("--m", type=float)
    p_est.add_argument("--trim", type=int)
    p_est.add_argument("--bandwidth", type=int)
    p_est.add_argument(
        "--quantile-transform",
        type=int,
        metavar="PSI",
        help="apply the excursion-count transform with PSI quantile levels first",
    )
    p_est.add_argument("--level-seed", type=int)
    p_est.set_defaults(func=_cmd_estimate)

    p_study = sub.add_parser("study", help="run the Monte Carlo classification study")
    p_study.add_argument("--config", help="JSON file with study settings")
    p_study.add_argument("--seed", type=int)
    p_study.add_argument("--scale", type=float, help="fraction of 1000 replications per Hurst value")
    p_study.add_argument("--scenario", choices=("fgn", "subordinated-fgn"))
    p_study.add_argument("--out-dir")
    p_study.add_argument("--workers", type=int)
    p_study.add_argument("--lengths", help="comma-separated series lengths")
    p_study.add_argument("--replications", type=int)
    p_study.add_argument("--psi", type=int)
    p_study.add_argument("--alpha", type=float)
    p_study.add_argument("--level-seed", type=int)
    p_study.set_defaults(func=_cmd_study)

    p_rank = sub.add_parser("rank", help="print the top-k cutoffs from study CSVs")
    p_rank.add_argument("results", nargs="+")
    p_rank.add_argument("-k", type=int, default=5)
    p_rank.set_defaults(func=_cmd_rank)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, LrdetectError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
