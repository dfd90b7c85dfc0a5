"""Behavioral labeling of clusters, frame classification, and period segmentation.

Cluster labels come from the mean raw (untransformed) opinion of members, so
the bands below always refer to the same scale regardless of the contrast
stiffness used for clustering.  A frame's label multiset then maps onto one
of four structural frame types, and maximal runs of equal type form periods.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import DataError
from .timeline import FrameAnalysis


class BehavioralLabel(str, Enum):
    POLARIZED_POS = "polarized_pos"
    POLARIZED_NEG = "polarized_neg"
    INTERMEDIATE_POS = "intermediate_pos"
    INTERMEDIATE_NEG = "intermediate_neg"
    BALANCED = "balanced"
    OTHER = "other"


class PeriodType(str, Enum):
    UNSTRUCTURED = "unstructured"
    BALANCED = "balanced"
    CONVERGENCE = "convergence"
    POLARIZED = "polarized"


@dataclass(frozen=True)
class LabelThresholds:
    """Band edges on mean raw opinion; outer bands are closed at the edges."""

    polarized_neg_max: float = 0.15
    balanced_min: float = 0.40
    balanced_max: float = 0.60
    polarized_pos_min: float = 0.85

    def __post_init__(self) -> None:
        seq = (
            0.0,
            self.polarized_neg_max,
            self.balanced_min,
            self.balanced_max,
            self.polarized_pos_min,
            1.0,
        )
        if any(a >= b for a, b in zip(seq, seq[1:])):
            raise DataError(f"label thresholds must be strictly ordered: {seq}")

    def label_of(self, mean_opinion: float) -> BehavioralLabel:
        m = mean_opinion
        if m <= self.polarized_neg_max:
            return BehavioralLabel.POLARIZED_NEG
        if m >= self.polarized_pos_min:
            return BehavioralLabel.POLARIZED_POS
        if self.balanced_min <= m <= self.balanced_max:
            return BehavioralLabel.BALANCED
        if m < self.balanced_min:
            return BehavioralLabel.INTERMEDIATE_NEG
        return BehavioralLabel.INTERMEDIATE_POS


def label_clusters(
    analysis: FrameAnalysis, thresholds: LabelThresholds = LabelThresholds()
) -> dict[int, BehavioralLabel]:
    """Label each cluster by the mean raw opinion of its members.

    Also stores the mapping on ``analysis.model.labels`` for downstream use.
    """
    if analysis.model is None:
        raise DataError("cannot label a degenerate frame (no model)")
    model = analysis.model
    opinion = {v.user_id: v.opinion for v in analysis.vectors}
    sums = np.zeros(model.k)
    counts = np.zeros(model.k, dtype=np.int64)
    for uid, cluster in zip(model.user_ids, model.labels_):
        if uid not in opinion:
            raise DataError(f"model user {uid!r} missing from frame vectors")
        sums[cluster] += opinion[uid]
        counts[cluster] += 1
    labels = {
        j: thresholds.label_of(float(sums[j] / counts[j])) for j in range(model.k)
    }
    model.labels = labels
    return labels


_PATTERNS: tuple[tuple[Counter, PeriodType], ...] = (
    (
        Counter({BehavioralLabel.POLARIZED_POS: 1, BehavioralLabel.POLARIZED_NEG: 1}),
        PeriodType.POLARIZED,
    ),
    (
        Counter(
            {
                BehavioralLabel.POLARIZED_POS: 1,
                BehavioralLabel.POLARIZED_NEG: 1,
                BehavioralLabel.BALANCED: 1,
            }
        ),
        PeriodType.BALANCED,
    ),
    (
        Counter(
            {
                BehavioralLabel.POLARIZED_POS: 1,
                BehavioralLabel.POLARIZED_NEG: 1,
                BehavioralLabel.INTERMEDIATE_POS: 1,
                BehavioralLabel.INTERMEDIATE_NEG: 1,
            }
        ),
        PeriodType.CONVERGENCE,
    ),
)


def classify_frame(labels: Sequence[BehavioralLabel], k: int) -> PeriodType:
    """Map a frame's cluster-label multiset onto a structural frame type.

    Exactly {pol+, pol-} is polarized; adding one balanced cluster is
    balanced; {pol+, pol-, int+, int-} is convergence.  Anything else,
    including any clustering with k >= 5, is unstructured.
    """
    if k >= 5:
        return PeriodType.UNSTRUCTURED
    bag = Counter(labels)
    for pattern, period_type in _PATTERNS:
        if bag == pattern:
            return period_type
    return PeriodType.UNSTRUCTURED


def classify_analyses(
    analyses: Sequence[FrameAnalysis], thresholds: LabelThresholds = LabelThresholds()
) -> tuple[list[PeriodType], list[tuple[BehavioralLabel, ...]]]:
    """Label and classify every frame; degenerate frames read as unstructured."""
    types: list[PeriodType] = []
    signatures: list[tuple[BehavioralLabel, ...]] = []
    for analysis in analyses:
        if analysis.model is None:
            types.append(PeriodType.UNSTRUCTURED)
            signatures.append(())
            continue
        labels = label_clusters(analysis, thresholds)
        signature = tuple(sorted(labels.values(), key=lambda l: l.value))
        types.append(classify_frame(list(labels.values()), analysis.model.k))
        signatures.append(signature)
    return types, signatures


@dataclass(frozen=True)
class Period:
    """A maximal run of frames sharing one frame type; frame range is half-open."""

    period_type: PeriodType
    frame_start: int
    frame_stop: int
    signatures: tuple[tuple[BehavioralLabel, ...], ...]

    @property
    def n_frames(self) -> int:
        return self.frame_stop - self.frame_start


def segment_periods(
    types: Sequence[PeriodType],
    signatures: Optional[Sequence[tuple[BehavioralLabel, ...]]] = None,
) -> list[Period]:
    """Run-length encode the frame-type sequence into maximal periods.

    Consistency is equality of frame type only; k and the exact label
    multiset may vary inside a period.
    """
    if not types:
        return []
    sigs = list(signatures) if signatures is not None else [()] * len(types)
    if len(sigs) != len(types):
        raise DataError("signatures/types length mismatch")
    periods: list[Period] = []
    run_start = 0
    for i in range(1, len(types) + 1):
        if i == len(types) or types[i] != types[run_start]:
            periods.append(
                Period(
                    period_type=types[run_start],
                    frame_start=run_start,
                    frame_stop=i,
                    signatures=tuple(sigs[run_start:i]),
                )
            )
            run_start = i
    return periods


# ----- inter-frame user flows ---------------------------------------------------------


@dataclass(frozen=True)
class FlowMatrix:
    """User movement between the clusters of two consecutive frames.

    Integer accounting is exact: every user active in the earlier frame either
    appears in one flow cell or leaves, and symmetrically for the later frame.
    """

    from_frame: int
    to_frame: int
    flows: dict[tuple[int, int], int]
    leaving_by_cluster: dict[int, int]
    entering_by_cluster: dict[int, int]
    n_from: int
    n_to: int

    def check(self) -> None:
        total = sum(self.flows.values())
        if total + sum(self.leaving_by_cluster.values()) != self.n_from:
            raise DataError("flow conservation violated on the source side")
        if total + sum(self.entering_by_cluster.values()) != self.n_to:
            raise DataError("flow conservation violated on the target side")


def flow_matrix(a1: FrameAnalysis, a2: FrameAnalysis) -> FlowMatrix:
    if a1.model is None or a2.model is None:
        raise DataError("flow matrix needs two non-degenerate frames")
    from_assign = a1.model.assignment
    to_assign = a2.model.assignment
    flows: dict[tuple[int, int], int] = {}
    leaving: dict[int, int] = {}
    entering: dict[int, int] = {}
    for uid, c1 in from_assign.items():
        c2 = to_assign.get(uid)
        if c2 is None:
            leaving[c1] = leaving.get(c1, 0) + 1
        else:
            flows[(c1, c2)] = flows.get((c1, c2), 0) + 1
    for uid, c2 in to_assign.items():
        if uid not in from_assign:
            entering[c2] = entering.get(c2, 0) + 1
    fm = FlowMatrix(
        from_frame=a1.frame.index,
        to_frame=a2.frame.index,
        flows=flows,
        leaving_by_cluster=leaving,
        entering_by_cluster=entering,
        n_from=len(from_assign),
        n_to=len(to_assign),
    )
    fm.check()
    return fm


# ----- convergence trend --------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceTrend:
    """Per-frame intermediate-to-polarized centroid gaps and their fitted slope."""

    frame_indices: tuple[int, ...]
    distances: tuple[float, ...]
    slope: float


_SAME_SIDE = {
    BehavioralLabel.INTERMEDIATE_POS: BehavioralLabel.POLARIZED_POS,
    BehavioralLabel.INTERMEDIATE_NEG: BehavioralLabel.POLARIZED_NEG,
}


def convergence_trend(
    analyses: Sequence[FrameAnalysis],
    thresholds: LabelThresholds = LabelThresholds(),
) -> ConvergenceTrend:
    """Track how far intermediate centroids sit from their same-side pole.

    For each frame, each intermediate cluster contributes its weighted-metric
    distance to the nearest polarized centroid of the same sign; the frame
    value is the mean over intermediate clusters.  The slope is the
    least-squares fit over frame order: strictly negative means the
    intermediate groups are closing in on the poles.
    """
    if len(analyses) < 2:
        raise DataError("convergence trend needs at least 2 frames")
    xs: list[int] = []
    ys: list[float] = []
    for analysis in analyses:
        if analysis.model is None:
            raise DataError(f"frame {analysis.frame.index} is degenerate")
        model = analysis.model
        labels = model.labels if model.labels else label_clusters(analysis, thresholds)
        by_label: dict[BehavioralLabel, list[int]] = {}
        for cluster, lab in labels.items():
            by_label.setdefault(lab, []).append(cluster)
        gaps: list[float] = []
        w = np.asarray(model.params.weights, dtype=float)
        for int_label, pol_label in _SAME_SIDE.items():
            for cluster in by_label.get(int_label, ()):
                poles = by_label.get(pol_label, ())
                if not poles:
                    raise DataError(
                        f"frame {analysis.frame.index}: no {pol_label.value} cluster "
                        f"to pair with {int_label.value}"
                    )
                c = model.centroids[cluster]
                gaps.append(
                    min(
                        float(np.sqrt((w * (c - model.centroids[p]) ** 2).sum()))
                        for p in poles
                    )
                )
        if not gaps:
            raise DataError(
                f"frame {analysis.frame.index} has no intermediate clusters"
            )
        xs.append(analysis.frame.index)
        ys.append(float(np.mean(gaps)))
    slope = float(np.polyfit(np.arange(len(ys), dtype=float), np.array(ys), 1)[0])
    return ConvergenceTrend(frame_indices=tuple(xs), distances=tuple(ys), slope=slope)


# ----- flow export ---------------------------------------------------------------------


def sankey_payload(
    analyses: Sequence[FrameAnalysis],
    thresholds: LabelThresholds = LabelThresholds(),
) -> dict:
    """Flow-diagram payload: per-frame cluster nodes, inter-frame link counts,
    and the entering/leaving tallies that make conservation checkable.

    Only consecutive non-degenerate frames contribute links.
    """
    nodes: list[dict] = []
    links: list[dict] = []
    entering: dict[str, int] = {}
    leaving: dict[str, int] = {}

    def node_id(frame: int, cluster: int) -> str:
        return f"f{frame}c{cluster}"

    labeled: list[FrameAnalysis] = []
    for analysis in analyses:
        if analysis.model is None:
            labeled.append(analysis)
            continue
        labels = label_clusters(analysis, thresholds)
        sizes = analysis.model.cluster_sizes()
        for j in range(analysis.model.k):
            nodes.append(
                {
                    "id": node_id(analysis.frame.index, j),
                    "frame": analysis.frame.index,
                    "cluster": j,
                    "label": labels[j].value,
                    "size": sizes[j],
                }
            )
        labeled.append(analysis)

    for a1, a2 in zip(labeled, labeled[1:]):
        if a1.model is None or a2.model is None:
            continue
        fm = flow_matrix(a1, a2)
        for (c1, c2), count in sorted(fm.flows.items()):
            links.append(
                {
                    "source": node_id(fm.from_frame, c1),
                    "target": node_id(fm.to_frame, c2),
                    "count": count,
                }
            )
        for c, count in sorted(fm.leaving_by_cluster.items()):
            leaving[node_id(fm.from_frame, c)] = count
        for c, count in sorted(fm.entering_by_cluster.items()):
            entering[node_id(fm.to_frame, c)] = count

    return {
        "schema_version": "1",
        "nodes": nodes,
        "links": links,
        "entering": entering,
        "leaving": leaving,
    }
