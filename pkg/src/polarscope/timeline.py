"""Sliding-window decomposition of a study span and per-window clustering."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Optional, Sequence

import numpy as np

from .clustering import ClusterModel, ClusterParams, select_k
from .errors import UsageError
from .factors import PolarizationVector, factor_vectors, feature_matrix
from .ingest import Dataset, filter_by_range


@dataclass(frozen=True)
class Timeframe:
    """Half-open observation window [start, end); consecutive starts differ by one step."""

    index: int
    start: datetime
    end: datetime
    truncated: bool = False  # end clipped at the span boundary

    @property
    def duration(self) -> timedelta:
        return self.end - self.start


def make_frames(
    start: datetime, end: datetime, window: timedelta, step: timedelta
) -> list[Timeframe]:
    """Tile [start, end) with windows advancing by one step.

    A frame with start s is generated while s + window - step < end, so the
    tail of the span still gets covered; any frame overshooting the span is
    truncated at the boundary and marked.  With step == window this tiles the
    span exactly; the default 28-day window at 14-day steps over a 211-day
    span yields 15 frames, the last one truncated.
    """
    if window <= timedelta(0) or step <= timedelta(0):
        raise UsageError("window and step must be positive")
    if step > window:
        raise UsageError("step must not exceed window")
    span = end - start
    if span <= timedelta(0):
        raise UsageError("empty timespan")
    if window > span:
        raise UsageError("window exceeds the timespan")
    frames: list[Timeframe] = []
    i = 0
    while start + i * step + window - step < end:
        s = start + i * step
        natural_end = s + window
        e = min(natural_end, end)
        frames.append(Timeframe(index=i, start=s, end=e, truncated=natural_end > end))
        i += 1
    return frames


@dataclass
class FrameAnalysis:
    """One frame's cohort factors and (unless degenerate) its fitted clustering."""

    frame: Timeframe
    vectors: tuple[PolarizationVector, ...]
    model: Optional[ClusterModel]
    inactive_users: frozenset[str]
    degenerate: bool = False


def analyze_frame(
    ds: Dataset,
    frame: Timeframe,
    cohort: set[str],
    params: ClusterParams,
    roster_mode: str = "full",
) -> FrameAnalysis:
    sub = filter_by_range(ds, frame.start, frame.end)
    present_codes = np.unique(sub.user_codes)
    present = {sub.user_pool[i] for i in present_codes} & cohort
    inactive = frozenset(cohort - present)
    k_min = params.k_range[0]
    if len(present) < k_min:
        vectors = tuple(factor_vectors(sub, present, roster_mode)) if present else ()
        return FrameAnalysis(frame, vectors, None, inactive, degenerate=True)
    vectors = tuple(factor_vectors(sub, present, roster_mode))
    ids, X = feature_matrix(vectors, params.stiffness)
    if len(np.unique(X, axis=0)) < k_min:
        return FrameAnalysis(frame, vectors, None, inactive, degenerate=True)
    model = select_k(X, params, ids=ids)
    return FrameAnalysis(frame, vectors, model, inactive, degenerate=False)


def analyze_frames(
    ds: Dataset,
    frames: Sequence[Timeframe],
    cohort: set[str],
    params: ClusterParams,
    roster_mode: str = "full",
    jobs: int = 1,
) -> list[FrameAnalysis]:
    """Cluster the retained cohort inside every frame.

    Frames with fewer active cohort members (or distinct feature points) than
    the smallest candidate k are flagged degenerate instead of failing the
    whole run.  Frames are independent, so ``jobs`` > 1 fans them out across
    threads; results keep frame order either way.
    """
    if jobs < 1:
        raise UsageError("jobs must be >= 1")
    if jobs == 1 or len(frames) <= 1:
        return [analyze_frame(ds, f, cohort, params, roster_mode) for f in frames]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(analyze_frame, ds, f, cohort, params, roster_mode) for f in frames
        ]
        return [f.result() for f in futures]
