"""Per-user polarization factors derived from interaction counts.

Every factor is an entropy complement scaled to [0, 1]:

* opinion: where the user's attention sits between the two communities,
  oriented so 1.0 is fully committed to the positive community, 0.0 fully
  committed to the negative one, and 0.5 perfectly split.
* source concentration (one per community): 1.0 means a single source from
  that community's roster, 0.0 means attention spread uniformly over the
  whole roster.  A community the user never touched scores 1.0, the
  concentration limit.

A polynomial contrast curve with a tunable stiffness exponent reshapes raw
factors before clustering; stiffness 1 is the identity, values below 1
stretch the neighborhoods of 0 and 1 where saturated users bunch up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DataError, UsageError
from .ingest import Dataset

_SUM_TOL = 1e-9


def normalized_entropy(probabilities: Sequence[float]) -> float:
    """Shannon entropy divided by log(n), so the result lives in [0, 1].

    Zero-probability outcomes contribute nothing; a single-outcome
    distribution has entropy 0 by convention.  The log base cancels.
    """
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DataError("probabilities must be a non-empty 1-D sequence")
    if np.any(p < -_SUM_TOL):
        raise DataError("probabilities must be nonnegative")
    total = float(p.sum())
    if abs(total - 1.0) > _SUM_TOL:
        raise DataError(f"probabilities sum to {total}, not 1")
    if p.size == 1:
        return 0.0
    p = np.clip(p, 0.0, None)
    nz = p[p > 0.0]
    h = float(-(nz * np.log(nz)).sum() / np.log(p.size))
    return min(1.0, max(0.0, h))


def opinion_factor(count_pos: int, count_neg: int) -> float:
    """Oriented opinion in [0, 1] from interaction counts with each community.

    The magnitude is the entropy complement of the two-way attention split;
    the orientation follows the majority side.  1.0 = all interactions with
    the positive community, 0.0 = all with the negative, 0.5 = an even split.
    """
    if count_pos < 0 or count_neg < 0:
        raise DataError("interaction counts must be nonnegative")
    total = count_pos + count_neg
    if total == 0:
        raise DataError("user has no interactions; opinion undefined")
    signed = _signed_opinion(np.array([count_pos]), np.array([count_neg]))[0]
    return float((signed + 1.0) / 2.0)


def _signed_opinion(count_pos: np.ndarray, count_neg: np.ndarray) -> np.ndarray:
    total = (count_pos + count_neg).astype(float)
    p = count_pos / total
    q = count_neg / total
    h = np.zeros_like(p)
    for part in (p, q):
        mask = part > 0.0
        h[mask] -= part[mask] * np.log2(part[mask])
    comp = np.clip(1.0 - h, 0.0, 1.0)
    sign = np.sign(count_pos - count_neg)
    return sign * comp


def source_factor(counts_by_source: Sequence[int]) -> float:
    """Concentration of attention over a community's full source roster.

    ``counts_by_source`` must cover every roster member, zeros included:
    the roster size is the entropy normalizer, so ignoring silent sources
    would overstate how spread out a user is.
    """
    counts = np.asarray(counts_by_source, dtype=float)
    if counts.ndim != 1 or counts.size < 1:
        raise DataError("counts_by_source must be a non-empty 1-D sequence")
    if np.any(counts < 0):
        raise DataError("counts must be nonnegative")
    total = counts.sum()
    if total <= 0:
        raise DataError("no interactions with this community; use the 1.0 convention upstream")
    if counts.size == 1:
        return 1.0
    return float(1.0 - normalized_entropy(counts / total))


@dataclass(frozen=True)
class PolarizationVector:
    """Raw per-user factors plus the counts they came from."""

    user_id: str
    opinion: float
    source_pos: float
    source_neg: float
    n_interactions_pos: int
    n_interactions_neg: int

    def as_array(self) -> np.ndarray:
        return np.array([self.opinion, self.source_pos, self.source_neg])


@dataclass(frozen=True)
class FeatureVector:
    """Contrast-transformed coordinates actually fed to the clusterer."""

    user_id: str
    opinion: float
    source_pos: float
    source_neg: float

    def as_array(self) -> np.ndarray:
        return np.array([self.opinion, self.source_pos, self.source_neg])


def transform(x, stiffness: float):
    """Polynomial contrast curve  x^s / (x^s + (1-x)^s)  on [0, 1].

    Fixed points at 0, 0.5 and 1 for every stiffness; stiffness 1 is the
    identity; s < 1 expands the extremes and compresses the middle, s > 1
    does the opposite.  Accepts scalars or arrays.
    """
    if not stiffness > 0:
        raise UsageError(f"stiffness must be > 0, got {stiffness}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -_SUM_TOL) or np.any(arr > 1.0 + _SUM_TOL):
        raise DataError("transform input must lie in [0, 1]")
    arr = np.clip(arr, 0.0, 1.0)
    num = np.power(arr, stiffness)
    den = num + np.power(1.0 - arr, stiffness)
    out = num / den
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def featurize(vector: PolarizationVector, stiffness: float) -> FeatureVector:
    return FeatureVector(
        user_id=vector.user_id,
        opinion=float(transform(vector.opinion, stiffness)),
        source_pos=float(transform(vector.source_pos, stiffness)),
        source_neg=float(transform(vector.source_neg, stiffness)),
    )


def feature_matrix(
    vectors: Sequence[PolarizationVector], stiffness: float
) -> tuple[tuple[str, ...], np.ndarray]:
    """Transform a batch of raw vectors into an (n, 3) coordinate array."""
    ids = tuple(v.user_id for v in vectors)
    raw = np.array([[v.opinion, v.source_pos, v.source_neg] for v in vectors])
    return ids, transform(raw, stiffness)


# ----- factor computation over a dataset --------------------------------------------


def _count_matrix(ds: Dataset, codes: np.ndarray) -> np.ndarray:
    n_sources = len(ds.roster)
    flat = ds.user_codes.astype(np.int64) * n_sources + ds.source_codes
    counts = np.bincount(flat, minlength=len(ds.user_pool) * n_sources)
    return counts.reshape(len(ds.user_pool), n_sources)[codes]


def _roster_entropy(counts: np.ndarray, mode: str) -> np.ndarray:
    """1 - normalized entropy per row; rows with no interactions get 1.0."""
    totals = counts.sum(axis=1)
    factors = np.ones(len(counts))
    live = totals > 0
    if not np.any(live):
        return factors
    sub = counts[live].astype(float)
    p = sub / sub.sum(axis=1, keepdims=True)
    plogp = np.where(p > 0.0, p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)
    if mode == "full":
        n = np.full(len(sub), counts.shape[1], dtype=float)
    elif mode == "touched":
        n = (sub > 0).sum(axis=1).astype(float)
    else:
        raise UsageError(f"unknown roster_mode {mode!r}")
    h = np.zeros(len(sub))
    multi = n > 1
    h[multi] = -plogp[multi].sum(axis=1) / np.log(n[multi])
    factors[live] = np.clip(1.0 - h, 0.0, 1.0)
    return factors


def factor_vectors(
    ds: Dataset,
    users: Optional[Iterable[str]] = None,
    roster_mode: str = "full",
) -> list[PolarizationVector]:
    """Compute raw factors for many users at once.

    Default cohort: every user with at least one record in ds.  Explicitly
    requested users must all have records, else DataError.
    """
    if users is None:
        ordered = [ds.user_pool[i] for i in np.unique(ds.user_codes)]
    else:
        ordered = sorted(set(users))
    pool_index = {u: i for i, u in enumerate(ds.user_pool)}
    missing = [u for u in ordered if u not in pool_index]
    if missing:
        raise DataError(f"users not in dataset: {missing[:5]}")
    codes = np.array([pool_index[u] for u in ordered], dtype=np.int64)
    counts = _count_matrix(ds, codes)
    pos_counts = counts[:, : ds.n_pos_sources]
    neg_counts = counts[:, ds.n_pos_sources :]
    n_pos = pos_counts.sum(axis=1)
    n_neg = neg_counts.sum(axis=1)
    if np.any(n_pos + n_neg == 0):
        silent = [u for u, a, b in zip(ordered, n_pos, n_neg) if a + b == 0]
        raise DataError(f"users with no interactions: {silent[:5]}")
    opinion = (_signed_opinion(n_pos, n_neg) + 1.0) / 2.0
    f_pos = _roster_entropy(pos_counts, roster_mode)
    f_neg = _roster_entropy(neg_counts, roster_mode)
    return [
        PolarizationVector(
            user_id=u,
            opinion=float(opinion[i]),
            source_pos=float(f_pos[i]),
            source_neg=float(f_neg[i]),
            n_interactions_pos=int(n_pos[i]),
            n_interactions_neg=int(n_neg[i]),
        )
        for i, u in enumerate(ordered)
    ]


def factor_vector(ds: Dataset, user: str, roster_mode: str = "full") -> PolarizationVector:
    """Raw polarization factors for a single user."""
    return factor_vectors(ds, [user], roster_mode=roster_mode)[0]
