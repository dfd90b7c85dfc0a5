"""Artifact writers: canonical JSON/CSV reports plus a hash manifest.

Every writer is deterministic byte for byte: keys are sorted, floats use
Python's shortest round-trip repr, non-finite values become null, and the
manifest carries content hashes instead of wall-clock timestamps, so a rerun
with the same seed reproduces every artifact exactly.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from datetime import datetime
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .clustering import ClusterModel, ClusterParams
from .errors import DataError
from .factors import PolarizationVector, transform
from .ingest import SCHEMA_VERSION, Dataset, format_timestamp
from .periods import (
    ConvergenceTrend,
    LabelThresholds,
    Period,
    label_clusters,
    sankey_payload,
)
from .timeline import FrameAnalysis


# ----- canonical JSON --------------------------------------------------------------


def jsonable(obj):
    """Recursively convert to plain JSON types; non-finite floats become null."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, datetime):
        return format_timestamp(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in seq]
    return obj


def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(canonical_json(obj))


def _fmt_float(x: float) -> str:
    # repr of a Python float is the shortest exact round-trip form.
    return repr(float(x)) if math.isfinite(float(x)) else ""


# ----- factor tables ---------------------------------------------------------------

_FACTOR_COLUMNS = (
    "user_id",
    "opinion",
    "source_pos",
    "source_neg",
    "n_interactions_pos",
    "n_interactions_neg",
)


def write_factor_table(
    vectors: Sequence[PolarizationVector], path: str, fmt: Optional[str] = None
) -> None:
    """Raw per-user factors as CSV (default) or JSON."""
    if fmt is None:
        fmt = "json" if path.endswith(".json") else "csv"
    if fmt == "json":
        write_json(
            {
                "schema_version": SCHEMA_VERSION,
                "users": [
                    {
                        "user_id": v.user_id,
                        "opinion": v.opinion,
                        "source_pos": v.source_pos,
                        "source_neg": v.source_neg,
                        "n_interactions_pos": v.n_interactions_pos,
                        "n_interactions_neg": v.n_interactions_neg,
                    }
                    for v in vectors
                ],
            },
            path,
        )
        return
    if fmt != "csv":
        raise DataError(f"unknown factor table format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_FACTOR_COLUMNS)
        for v in vectors:
            writer.writerow(
                [
                    v.user_id,
                    _fmt_float(v.opinion),
                    _fmt_float(v.source_pos),
                    _fmt_float(v.source_neg),
                    v.n_interactions_pos,
                    v.n_interactions_neg,
                ]
            )


# ----- cluster reports ---------------------------------------------------------------


def _params_dict(params: ClusterParams) -> dict:
    return {
        "k_range": list(params.k_range),
        "stiffness": params.stiffness,
        "weights": list(params.weights),
        "n_restarts": params.n_restarts,
        "max_iters": params.max_iters,
        "tol": params.tol,
        "seed": params.seed,
    }


def cluster_report(
    model: ClusterModel,
    vectors: Sequence[PolarizationVector],
    thresholds: Optional[LabelThresholds] = None,
    extra: Optional[dict] = None,
) -> dict:
    """Full clustering outcome: metrics, centroids, per-user rows.

    Per-user rows carry both raw factors and the transformed features the
    clustering ran on, so renderers never need to recompute the transform.
    """
    thresholds = thresholds or LabelThresholds()
    by_id = {v.user_id: v for v in vectors}
    stiff = model.params.stiffness
    raw_mean: dict[int, list[float]] = {}
    users = []
    for uid, cluster in zip(model.user_ids, model.labels_):
        v = by_id[uid]
        users.append(
            {
                "user_id": uid,
                "cluster": int(cluster),
                "opinion": v.opinion,
                "source_pos": v.source_pos,
                "source_neg": v.source_neg,
                "features": [
                    transform(v.opinion, stiff),
                    transform(v.source_pos, stiff),
                    transform(v.source_neg, stiff),
                ],
            }
        )
        raw_mean.setdefault(int(cluster), []).append(v.opinion)
    clusters = []
    for j in range(model.k):
        mean_opinion = float(np.mean(raw_mean.get(j, [math.nan])))
        clusters.append(
            {
                "cluster": j,
                "size": int((model.labels_ == j).sum()),
                "centroid": [float(c) for c in model.centroids[j]],
                "mean_opinion": mean_opinion,
                "label": thresholds.label_of(mean_opinion).value,
            }
        )
    report = {
        "schema_version": SCHEMA_VERSION,
        "params": _params_dict(model.params),
        "k": model.k,
        "inertia": model.inertia,
        "silhouette": model.silhouette,
        "davies_bouldin": model.davies_bouldin,
        "k_table": [dict(row) for row in model.k_table],
        "clusters": clusters,
        "users": users,
    }
    if extra:
        report.update(extra)
    return report


# ----- temporal reports ----------------------------------------------------------------


def frames_report(
    analyses: Sequence[FrameAnalysis],
    types: Sequence,
    thresholds: Optional[LabelThresholds] = None,
    extra: Optional[dict] = None,
) -> dict:
    """Per-frame clustering summary for one temporal run."""
    thresholds = thresholds or LabelThresholds()
    frames = []
    for analysis, ptype in zip(analyses, types):
        entry = {
            "frame": analysis.frame.index,
            "start": format_timestamp(analysis.frame.start),
            "end": format_timestamp(analysis.frame.end),
            "truncated": analysis.frame.truncated,
            "n_users": len(analysis.vectors),
            "degenerate": analysis.degenerate,
            "period_type": ptype.value,
        }
        if analysis.model is not None:
            model = analysis.model
            labels = label_clusters(analysis, thresholds)
            by_cluster: dict[int, list[float]] = {}
            for v, c in zip(analysis.vectors, model.labels_):
                by_cluster.setdefault(int(c), []).append(v.opinion)
            entry.update(
                {
                    "k": model.k,
                    "silhouette": model.silhouette,
                    "davies_bouldin": model.davies_bouldin,
                    "clusters": [
                        {
                            "cluster": j,
                            "size": int((model.labels_ == j).sum()),
                            "centroid": [float(c) for c in model.centroids[j]],
                            "mean_opinion": float(np.mean(by_cluster[j])),
                            "label": labels[j].value,
                        }
                        for j in range(model.k)
                    ],
                }
            )
        else:
            entry.update({"k": None, "silhouette": None, "davies_bouldin": None, "clusters": []})
        frames.append(entry)
    report = {"schema_version": SCHEMA_VERSION, "frames": frames}
    if extra:
        report.update(extra)
    return report


def write_frames_csv(analyses: Sequence[FrameAnalysis], types: Sequence, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            (
                "frame",
                "start",
                "end",
                "truncated",
                "n_users",
                "k",
                "silhouette",
                "davies_bouldin",
                "period_type",
            )
        )
        for analysis, ptype in zip(analyses, types):
            model = analysis.model
            writer.writerow(
                [
                    analysis.frame.index,
                    format_timestamp(analysis.frame.start),
                    format_timestamp(analysis.frame.end),
                    int(analysis.frame.truncated),
                    len(analysis.vectors),
                    model.k if model is not None else "",
                    _fmt_float(model.silhouette) if model is not None else "",
                    _fmt_float(model.davies_bouldin) if model is not None else "",
                    ptype.value,
                ]
            )


def periods_report(
    periods: Sequence[Period],
    types: Sequence,
    trend: Optional[ConvergenceTrend] = None,
    trend_error: Optional[str] = None,
    extra: Optional[dict] = None,
) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "frame_types": [t.value for t in types],
        "periods": [
            {
                "period_type": p.period_type.value,
                "frame_start": p.frame_start,
                "frame_stop": p.frame_stop,
                "n_frames": p.n_frames,
                "signatures": [[s.value for s in sig] for sig in p.signatures],
            }
            for p in periods
        ],
        "change_points": [p.frame_start for p in periods],
        "convergence_trend": (
            {
                "frame_indices": list(trend.frame_indices),
                "distances": [float(d) for d in trend.distances],
                "slope": trend.slope,
            }
            if trend is not None
            else None
        ),
    }
    if trend is None and trend_error:
        report["convergence_trend_error"] = trend_error
    if extra:
        report.update(extra)
    return report


def write_sankey(
    analyses: Sequence[FrameAnalysis],
    path: str,
    thresholds: Optional[LabelThresholds] = None,
) -> None:
    write_json(sankey_payload(analyses, thresholds or LabelThresholds()), path)


# ----- dataset stats -------------------------------------------------------------------


def dataset_summary(ds: Dataset) -> dict:
    pos = int(ds.community_is_pos().sum())
    out = {
        "schema_version": SCHEMA_VERSION,
        "debate_name": ds.config.debate_name,
        "n_records": len(ds),
        "n_users": int(len(np.unique(ds.user_codes))),
        "records_pos": pos,
        "records_neg": len(ds) - pos,
    }
    if len(ds):
        lo, hi = ds.time_bounds()
        out["first_record"] = format_timestamp(lo)
        out["last_record"] = format_timestamp(hi)
    if ds.load_report is not None:
        report = ds.load_report.to_dict()
        # identical runs from different directories must hash identically
        report["path"] = os.path.basename(report["path"])
        out["load_report"] = report
    return out


# ----- manifest --------------------------------------------------------------------------


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    out_dir: str,
    command: str,
    parameters: dict,
    artifacts: Iterable[str],
    inputs: Iterable[str] = (),
    path: Optional[str] = None,
) -> str:
    """Write manifest.json next to the artifacts it describes.

    Artifact and input paths are recorded relative to the manifest with
    content hashes; no volatile fields, so byte-identical runs produce a
    byte-identical manifest.
    """
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": jsonable(parameters),
        "inputs": {
            os.path.basename(p): sha256_file(p) for p in sorted(set(inputs))
        },
        "artifacts": {
            os.path.relpath(p, out_dir).replace(os.sep, "/"): sha256_file(p)
            for p in sorted(set(artifacts))
        },
    }
    target = path or os.path.join(out_dir, "manifest.json")
    write_json(manifest, target)
    return target


def verify_manifest(manifest_path: str) -> list[str]:
    """Re-hash the artifacts a manifest lists; return human-readable mismatches."""
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read manifest {manifest_path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"manifest {manifest_path} is not valid JSON: {exc}") from None
    base = os.path.dirname(os.path.abspath(manifest_path))
    problems = []
    artifacts = manifest.get("artifacts")
    if not isinstance(artifacts, dict):
        raise DataError(f"manifest {manifest_path} has no artifacts map")
    for rel, expected in sorted(artifacts.items()):
        full = os.path.join(base, rel)
        if not os.path.exists(full):
            problems.append(f"missing artifact: {rel}")
        elif sha256_file(full) != expected:
            problems.append(f"hash mismatch: {rel}")
    return problems
