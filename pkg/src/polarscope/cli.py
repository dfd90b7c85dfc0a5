"""Command-line interface.

Subcommands: ``synth`` (generate a log with planted structure), ``aggregate``
(factors + clustering over one timespan), ``temporal`` (sliding-window frames,
periods, flows), ``report`` (summarize or verify an artifact directory).

Exit codes: 0 success, 1 usage error, 2 data error, 3 degenerate analysis.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from datetime import timedelta
from typing import Optional, Sequence

from . import exports
from .clustering import ClusterParams, select_k, tune_hyperparams
from .errors import DataError, DegenerateAnalysisError, PolarscopeError, UsageError
from .factors import factor_vectors, feature_matrix
from .ingest import (
    DebateConfig,
    format_timestamp,
    load_config,
    load_dataset,
    parse_timespan,
    save_config,
    save_dataset,
    active_users,
)
from .periods import (
    LabelThresholds,
    PeriodType,
    classify_analyses,
    convergence_trend,
    segment_periods,
)
from .synth import generate_scenario, load_scenario, preset, preset_names, scenario_to_dict
from .timeline import analyze_frames, make_frames


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad options; route through UsageError
    # so the documented usage exit code (1) holds.
    def error(self, message: str):
        raise UsageError(message)


def _parse_duration(text: str) -> timedelta:
    m = re.fullmatch(r"(\d+(?:\.\d+)?)([dh]?)", text.strip())
    if not m:
        raise UsageError(f"bad duration {text!r} (use e.g. 28d or 12h)")
    value = float(m.group(1))
    return timedelta(hours=value) if m.group(2) == "h" else timedelta(days=value)


def _parse_weights(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"weights must be three comma-separated numbers, got {text!r}")
    try:
        w = tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad weights {text!r}") from None
    return w  # type: ignore[return-value]


def _parse_span(start: str, end: str):
    try:
        return parse_timespan(start, end)
    except DataError as exc:
        raise UsageError(str(exc)) from None


def _out_dir(args) -> str:
    out = args.out or os.environ.get("POLARSCOPE_OUT")
    if not out:
        raise UsageError("--out is required (or set POLARSCOPE_OUT)")
    os.makedirs(out, exist_ok=True)
    return out


def _cluster_params(args, stiffness: Optional[float] = None) -> ClusterParams:
    return ClusterParams(
        k_range=(args.k_min, args.k_max),
        stiffness=stiffness if stiffness is not None else args.stiffness,
        weights=_parse_weights(args.weights),
        n_restarts=args.restarts,
        seed=args.seed,
    )


def _read(args, config: DebateConfig, timespan: tuple) -> "object":
    ds = load_dataset(
        args.log, config, timespan, mode="lenient" if args.lenient else "strict"
    )
    if ds.load_report is not None:
        ds.load_report.write(sys.stderr)
    if len(ds) == 0:
        raise DataError(f"{args.log}: no usable records inside the timespan")
    return ds


def _load(args) -> tuple[DebateConfig, tuple, "object"]:
    config = load_config(args.config)
    timespan = _parse_span(args.start, args.end)
    return config, timespan, _read(args, config, timespan)


# ----- synth ---------------------------------------------------------------------------


def cmd_synth(args) -> int:
    if bool(args.preset) == bool(args.scenario):
        raise UsageError("exactly one of --preset or --scenario is required")
    scenario = preset(args.preset) if args.preset else load_scenario(args.scenario)
    out = _out_dir(args)
    ds, truth = generate_scenario(scenario, args.seed)

    log_path = os.path.join(out, f"log.{args.format}")
    config_path = os.path.join(out, "debate_config.json")
    truth_path = os.path.join(out, "ground_truth.json")
    scenario_path = os.path.join(out, "scenario.json")
    save_dataset(ds, log_path, fmt=args.format)
    save_config(scenario.config, config_path)
    exports.write_json(truth.to_dict(), truth_path)
    exports.write_json(scenario_to_dict(scenario), scenario_path)
    manifest = exports.write_manifest(
        out,
        "synth",
        {
            "preset": args.preset,
            "scenario_file": args.scenario,
            "seed": args.seed,
            "format": args.format,
            "n_users": scenario.n_users,
            "timespan": [
                format_timestamp(scenario.timespan[0]),
                format_timestamp(scenario.timespan[1]),
            ],
        },
        artifacts=[log_path, config_path, truth_path, scenario_path],
    )
    print(
        f"generated {len(ds)} records for {scenario.n_users} users "
        f"({scenario.name}, seed {args.seed})"
    )
    print(f"artifacts in {out} (manifest: {os.path.basename(manifest)})")
    return 0


# ----- aggregate --------------------------------------------------------------------------


def cmd_aggregate(args) -> int:
    out = _out_dir(args)
    config, timespan, ds = _load(args)
    vectors = factor_vectors(ds, roster_mode=args.roster_mode)

    tuning = None
    if args.tune:
        result = tune_hyperparams(vectors, params=_cluster_params(args))
        model = result.model
        tuning = {
            "stiffness": result.stiffness,
            "weights": list(result.weights),
            "cells": [dict(row) for row in result.report],
        }
    else:
        params = _cluster_params(args)
        ids, X = feature_matrix(vectors, params.stiffness)
        model = select_k(X, params, ids=ids)

    factors_path = os.path.join(out, "factors.csv")
    clusters_path = os.path.join(out, "clusters.json")
    summary_path = os.path.join(out, "summary.json")
    exports.write_factor_table(vectors, factors_path)
    extra = {
        "debate_name": config.debate_name,
        "timespan": [format_timestamp(timespan[0]), format_timestamp(timespan[1])],
        "roster_mode": args.roster_mode,
    }
    if tuning is not None:
        extra["tuning"] = tuning
    exports.write_json(exports.cluster_report(model, vectors, extra=extra), clusters_path)
    exports.write_json(exports.dataset_summary(ds), summary_path)
    exports.write_manifest(
        out,
        "aggregate",
        {
            "log": os.path.basename(args.log),
            "config": os.path.basename(args.config),
            "timespan": [format_timestamp(timespan[0]), format_timestamp(timespan[1])],
            "roster_mode": args.roster_mode,
            "mode": "lenient" if args.lenient else "strict",
            "tune": args.tune,
            "params": {
                "k_range": [args.k_min, args.k_max],
                "stiffness": model.params.stiffness,
                "weights": list(model.params.weights),
                "n_restarts": args.restarts,
                "seed": args.seed,
            },
        },
        artifacts=[factors_path, clusters_path, summary_path],
        inputs=[args.log, args.config],
    )
    print(
        f"{len(vectors)} users, k={model.k}, "
        f"silhouette={model.silhouette:.4f}, davies_bouldin={model.davies_bouldin:.4f}"
    )
    if tuning is not None:
        print(
            f"tuned: stiffness={model.params.stiffness}, "
            f"weights={tuple(model.params.weights)}"
        )
    sizes = model.cluster_sizes()
    for j in range(model.k):
        print(f"  cluster {j}: {sizes[j]} users")
    return 0


# ----- temporal ----------------------------------------------------------------------------


def cmd_temporal(args) -> int:
    out = _out_dir(args)
    config = load_config(args.config)
    timespan = _parse_span(args.start, args.end)
    window = _parse_duration(args.window)
    step = _parse_duration(args.step)
    # cheap argument checks must fail before the (possibly large) log is read
    frames = make_frames(timespan[0], timespan[1], window, step)
    params = _cluster_params(args)
    ds = _read(args, config, timespan)
    cohort = active_users(ds, frames, args.min_active)
    analyses = analyze_frames(
        ds, frames, cohort, params, roster_mode=args.roster_mode, jobs=args.jobs
    )
    thresholds = LabelThresholds()
    types, signatures = classify_analyses(analyses, thresholds)
    periods = segment_periods(types, signatures)

    trend = None
    trend_error = None
    conv = [
        p
        for p in periods
        if p.period_type == PeriodType.CONVERGENCE and p.n_frames >= 2
    ]
    if conv:
        longest = max(conv, key=lambda p: (p.n_frames, p.frame_start))
        try:
            trend = convergence_trend(
                analyses[longest.frame_start : longest.frame_stop], thresholds
            )
        except PolarscopeError as exc:
            trend_error = str(exc)
    else:
        trend_error = "no convergence period of at least 2 frames"

    frames_json = os.path.join(out, "frames.json")
    frames_csv = os.path.join(out, "frames.csv")
    periods_path = os.path.join(out, "periods.json")
    sankey_path = os.path.join(out, "sankey.json")
    extra = {
        "debate_name": config.debate_name,
        "timespan": [format_timestamp(timespan[0]), format_timestamp(timespan[1])],
        "window": args.window,
        "step": args.step,
        "min_active_fraction": args.min_active,
        "cohort_size": len(cohort),
        "roster_mode": args.roster_mode,
    }
    exports.write_json(
        exports.frames_report(analyses, types, thresholds, extra=extra), frames_json
    )
    exports.write_frames_csv(analyses, types, frames_csv)
    exports.write_json(
        exports.periods_report(periods, types, trend, trend_error, extra=extra),
        periods_path,
    )
    exports.write_sankey(analyses, sankey_path, thresholds)
    exports.write_manifest(
        out,
        "temporal",
        {
            "log": os.path.basename(args.log),
            "config": os.path.basename(args.config),
            "timespan": [format_timestamp(timespan[0]), format_timestamp(timespan[1])],
            "window": args.window,
            "step": args.step,
            "min_active_fraction": args.min_active,
            "roster_mode": args.roster_mode,
            "mode": "lenient" if args.lenient else "strict",
            "jobs": args.jobs,
            "params": {
                "k_range": [args.k_min, args.k_max],
                "stiffness": params.stiffness,
                "weights": list(params.weights),
                "n_restarts": args.restarts,
                "seed": args.seed,
            },
        },
        artifacts=[frames_json, frames_csv, periods_path, sankey_path],
        inputs=[args.log, args.config],
    )
    print(f"{len(frames)} frames, cohort of {len(cohort)} active users")
    for p in periods:
        print(
            f"  frames {p.frame_start}..{p.frame_stop - 1}: {p.period_type.value} "
            f"({p.n_frames} frames)"
        )
    if trend is not None:
        print(f"convergence trend slope: {trend.slope:.6f}")
    elif trend_error:
        print(f"convergence trend unavailable: {trend_error}")
    return 0


# ----- report --------------------------------------------------------------------------------


def cmd_report(args) -> int:
    manifest_path = os.path.join(args.dir, "manifest.json")
    if not os.path.exists(manifest_path):
        raise DataError(f"no manifest.json in {args.dir}")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"manifest is not valid JSON: {exc}") from None

    print(f"command: {manifest.get('command')}")
    print(f"parameters: {json.dumps(manifest.get('parameters'), sort_keys=True)}")
    for rel, digest in sorted(manifest.get("artifacts", {}).items()):
        print(f"  {rel}  sha256:{digest[:12]}")

    clusters_path = os.path.join(args.dir, "clusters.json")
    if os.path.exists(clusters_path):
        with open(clusters_path, "r", encoding="utf-8") as fh:
            clusters = json.load(fh)
        print(
            f"clustering: k={clusters.get('k')}, "
            f"silhouette={clusters.get('silhouette')}, "
            f"davies_bouldin={clusters.get('davies_bouldin')}"
        )
    periods_path = os.path.join(args.dir, "periods.json")
    if os.path.exists(periods_path):
        with open(periods_path, "r", encoding="utf-8") as fh:
            periods = json.load(fh)
        print(f"frame types: {' '.join(periods.get('frame_types', []))}")

    if args.verify:
        problems = exports.verify_manifest(manifest_path)
        if problems:
            for problem in problems:
                print(problem, file=sys.stderr)
            raise DataError(f"{len(problems)} artifact(s) failed verification")
        print("all artifact hashes verified")
    return 0


# ----- wiring ---------------------------------------------------------------------------------


def _add_common_analysis_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--log", required=True, help="interaction log (JSONL or CSV)")
    sub.add_argument("--config", required=True, help="debate config JSON")
    sub.add_argument("--start", required=True, help="timespan start (RFC 3339 or date)")
    sub.add_argument("--end", required=True, help="timespan end, exclusive")
    sub.add_argument("--stiffness", type=float, default=1.0, help="contrast stiffness")
    sub.add_argument(
        "--weights", default="0.6,0.2,0.2", help="axis weights: opinion,source_pos,source_neg"
    )
    sub.add_argument("--k-min", type=int, default=2, help="smallest k to consider")
    sub.add_argument("--k-max", type=int, default=10, help="largest k to consider")
    sub.add_argument("--restarts", type=int, default=20, help="k-means restarts")
    sub.add_argument("--seed", type=int, default=0, help="random seed")
    sub.add_argument(
        "--roster-mode",
        choices=("full", "touched"),
        default="full",
        help="spread factor support: full roster or touched sources only",
    )
    sub.add_argument(
        "--lenient",
        action="store_true",
        help="skip and count bad rows instead of aborting",
    )
    sub.add_argument("--out", default=None, help="output directory (env POLARSCOPE_OUT)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polarscope", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    synth = commands.add_parser("synth", help="generate a synthetic interaction log")
    synth.add_argument("--preset", default=None, help=f"one of: {', '.join(preset_names())}")
    synth.add_argument("--scenario", default=None, help="scenario recipe JSON")
    synth.add_argument("--seed", type=int, default=0, help="random seed")
    synth.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    synth.add_argument("--out", default=None, help="output directory (env POLARSCOPE_OUT)")
    synth.set_defaults(func=cmd_synth)

    aggregate = commands.add_parser(
        "aggregate", help="factors and clustering over one timespan"
    )
    _add_common_analysis_args(aggregate)
    aggregate.add_argument(
        "--tune", action="store_true", help="grid-search stiffness and weights"
    )
    aggregate.set_defaults(func=cmd_aggregate)

    temporal = commands.add_parser(
        "temporal", help="sliding-window frames, periods and flows"
    )
    _add_common_analysis_args(temporal)
    temporal.add_argument("--window", default="28d", help="frame length (e.g. 28d)")
    temporal.add_argument("--step", default="14d", help="frame stride (e.g. 14d)")
    temporal.add_argument(
        "--min-active",
        type=float,
        default=0.8,
        help="fraction of frames a user must be active in",
    )
    temporal.add_argument("--jobs", type=int, default=1, help="parallel frame workers")
    temporal.set_defaults(func=cmd_temporal)

    report = commands.add_parser("report", help="summarize an artifact directory")
    report.add_argument("--dir", required=True, help="artifact directory with manifest.json")
    report.add_argument(
        "--verify", action="store_true", help="re-hash artifacts against the manifest"
    )
    report.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DegenerateAnalysisError as exc:
        print(f"degenerate analysis: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except PolarscopeError as exc:  # any future subtype defaults to a data problem
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
