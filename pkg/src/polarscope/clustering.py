"""Weighted k-means over factor features, with index-driven model selection.

The metric is axis-weighted Euclidean distance.  Internally every routine
embeds points by scaling coordinate j with sqrt(weight_j), after which plain
Euclidean geometry applies; centroids are reported back in the original
feature space.  All randomness flows from one integer seed through
numpy SeedSequence substreams (one per restart), so results are reproducible
bit for bit and adding restarts never discards an earlier, better solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, DegenerateAnalysisError, UsageError

_TIE_TOL = 1e-6  # silhouette ties fall back to Davies-Bouldin, then smaller k


@dataclass(frozen=True)
class ClusterParams:
    """Everything that determines a clustering run, including the seed."""

    k_range: tuple[int, int] = (2, 10)
    stiffness: float = 1.0
    weights: tuple[float, float, float] = (0.6, 0.2, 0.2)
    n_restarts: int = 20
    max_iters: int = 300
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if not (1 <= self.k_range[0] <= self.k_range[1]):
            raise UsageError(f"bad k_range {self.k_range}")
        if not self.stiffness > 0:
            raise UsageError("stiffness must be > 0")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0):
            raise UsageError("weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > 1e-9:
            raise UsageError(f"weights must sum to 1, got {w.sum()}")
        if self.n_restarts < 1 or self.max_iters < 1 or self.tol < 0:
            raise UsageError("bad restart/iteration parameters")


@dataclass
class ClusterModel:
    """A fitted clustering: centroids in feature space plus the assignment."""

    params: ClusterParams
    k: int
    centroids: np.ndarray  # (k, d), feature space
    user_ids: tuple[str, ...]
    labels_: np.ndarray  # (n,) cluster index per point, aligned with user_ids
    inertia: float
    silhouette: float
    davies_bouldin: float
    k_table: tuple[dict, ...] = ()
    labels: Optional[dict[int, object]] = None  # behavioral labels, set downstream

    @property
    def assignment(self) -> dict[str, int]:
        return {u: int(c) for u, c in zip(self.user_ids, self.labels_)}

    def cluster_sizes(self) -> list[int]:
        return np.bincount(self.labels_, minlength=self.k).tolist()

    def members(self, cluster: int) -> list[str]:
        return [u for u, c in zip(self.user_ids, self.labels_) if c == cluster]


def _coerce_points(points, ids: Optional[Sequence[str]]) -> tuple[np.ndarray, tuple[str, ...]]:
    if isinstance(points, np.ndarray):
        X = np.asarray(points, dtype=float)
    else:
        pts = list(points)
        if pts and hasattr(pts[0], "as_array"):
            X = np.array([p.as_array() for p in pts])
            if ids is None:
                ids = [p.user_id for p in pts]
        else:
            X = np.asarray(pts, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise DataError("points must form a non-empty (n, d) array")
    if ids is None:
        ids = [f"p{i:05d}" for i in range(len(X))]
    if len(ids) != len(X):
        raise DataError("ids/points length mismatch")
    return X, tuple(ids)


def _scale(X: np.ndarray, weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (X.shape[1],):
        raise UsageError(f"weights dimension {w.shape} does not match points {X.shape}")
    return X * np.sqrt(w)


def _pairwise_sq(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    sq = (X * X).sum(axis=1)[:, None] + (C * C).sum(axis=1)[None, :] - 2.0 * (X @ C.T)
    return np.maximum(sq, 0.0)


def _pairwise_dist(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Pairwise distances via the explicit difference form, in row blocks.

    The dot-product expansion used inside the Lloyd loop loses ~1e-10 of
    precision; the validity indices are held to straight-from-definition
    accuracy, so they pay for the exact form instead.
    """
    out = np.empty((len(X), len(Y)))
    block = max(1, (1 << 22) // max(1, Y.size))
    for i in range(0, len(X), block):
        diff = X[i : i + block, None, :] - Y[None, :, :]
        out[i : i + block] = np.sqrt((diff * diff).sum(axis=-1))
    return out


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(X)
    centroids = np.empty((k, X.shape[1]))
    centroids[0] = X[rng.integers(n)]
    d2 = _pairwise_sq(X, centroids[0:1])[:, 0]
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)  # all remaining mass on chosen points
        centroids[j] = X[idx]
        d2 = np.minimum(d2, _pairwise_sq(X, centroids[j : j + 1])[:, 0])
    return centroids


def _repair_empty(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> None:
    """Give each empty cluster the point farthest from its current centroid."""
    k = len(centroids)
    sizes = np.bincount(labels, minlength=k)
    for j in range(k):
        if sizes[j] > 0:
            continue
        dists = np.sqrt(((X - centroids[labels]) ** 2).sum(axis=1))
        dists[sizes[labels] <= 1] = -1.0  # never empty another cluster
        cand = int(np.argmax(dists))
        sizes[labels[cand]] -= 1
        labels[cand] = j
        sizes[j] = 1
        centroids[j] = X[cand]


def _lloyd(
    X: np.ndarray, k: int, rng: np.random.Generator, max_iters: int, tol: float
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    centroids = _kmeans_pp_init(X, k, rng)
    labels = np.full(len(X), -1, dtype=np.int32)
    prev_inertia = math.inf
    history: list[float] = []
    for _ in range(max_iters):
        dists = _pairwise_sq(X, centroids)
        new_labels = dists.argmin(axis=1).astype(np.int32)
        _repair_empty(X, new_labels, centroids)
        for j in range(k):
            mask = new_labels == j
            centroids[j] = X[mask].mean(axis=0)
        inertia = float(_pairwise_sq(X, centroids)[np.arange(len(X)), new_labels].sum())
        history.append(inertia)
        unchanged = np.array_equal(new_labels, labels)
        labels = new_labels
        if unchanged or abs(prev_inertia - inertia) <= tol:
            break
        prev_inertia = inertia
    return labels, centroids, history[-1], history


def kmeans(points, k: int, params: ClusterParams, ids: Optional[Sequence[str]] = None) -> ClusterModel:
    """Weighted k-means with k-means++ seeding and seeded restarts.

    Deterministic for a given (seed, inputs): restart r draws from substream
    (seed, r), the best restart wins by strict inertia comparison, and cluster
    indices are canonicalized by descending centroid coordinates.
    """
    X, user_ids = _coerce_points(points, ids)
    n_distinct = len(np.unique(X, axis=0))
    if not 1 <= k <= n_distinct:
        raise DegenerateAnalysisError(
            f"k={k} infeasible: only {n_distinct} distinct points"
        )
    S = _scale(X, params.weights)
    best: Optional[tuple[np.ndarray, np.ndarray, float]] = None
    for r in range(params.n_restarts):
        rng = np.random.default_rng(np.random.SeedSequence(params.seed, spawn_key=(r,)))
        labels, cents, inertia, _ = _lloyd(S, k, rng, params.max_iters, params.tol)
        if best is None or inertia < best[2]:
            best = (labels, cents, inertia)
    labels, _, inertia = best

    # Centroids reported in feature space: the scaled-space mean unscales to
    # the plain mean of member coordinates.
    centroids = np.vstack([X[labels == j].mean(axis=0) for j in range(k)])
    order = sorted(range(k), key=lambda j: tuple(-centroids[j]))
    remap = np.empty(k, dtype=np.int32)
    for new, old in enumerate(order):
        remap[old] = new
    labels = remap[labels]
    centroids = centroids[order]

    if k >= 2:
        D = _pairwise_dist(S, S)
        sil = _silhouette_from_matrix(D, labels, k)
        try:
            db = davies_bouldin(X, labels, centroids, weights=params.weights)
        except DegenerateAnalysisError:
            db = math.inf
    else:
        sil, db = float("nan"), float("nan")
    return ClusterModel(
        params=params,
        k=k,
        centroids=centroids,
        user_ids=user_ids,
        labels_=labels,
        inertia=inertia,
        silhouette=sil,
        davies_bouldin=db,
    )


# ----- validity indices ---------------------------------------------------------


def _silhouette_from_matrix(D: np.ndarray, labels: np.ndarray, k: int) -> float:
    n = len(D)
    onehot = np.zeros((n, k))
    onehot[np.arange(n), labels] = 1.0
    sizes = onehot.sum(axis=0)
    sums = D @ onehot  # (n, k): total distance from each point to each cluster
    own = sizes[labels]
    s = np.zeros(n)
    multi = own > 1
    a = np.zeros(n)
    a[multi] = sums[np.arange(n), labels][multi] / (own[multi] - 1.0)
    mean_to = sums / np.maximum(sizes, 1.0)[None, :]
    mean_to[np.arange(n), labels] = np.inf
    mean_to[:, sizes == 0] = np.inf
    b = mean_to.min(axis=1)
    denom = np.maximum(a, b)
    valid = multi & (denom > 0)
    s[valid] = (b[valid] - a[valid]) / denom[valid]
    # singleton clusters contribute 0; so do degenerate zero-distance cases
    return float(s.mean())


def silhouette(points, labels: Sequence[int], weights: Optional[Sequence[float]] = None) -> float:
    """Mean silhouette width under the weighted metric.

    For each point, a = mean distance to its own cluster (excluding itself),
    b = smallest mean distance to another cluster; the width is
    (b - a) / max(a, b).  Points in singleton clusters contribute 0.
    """
    X, _ = _coerce_points(points, None)
    lab = np.asarray(labels, dtype=np.int64)
    if len(lab) != len(X):
        raise DataError("labels/points length mismatch")
    k = int(lab.max()) + 1
    if k < 2 or len(X) < 3:
        raise DegenerateAnalysisError("silhouette needs >= 2 clusters and >= 3 points")
    S = _scale(X, weights) if weights is not None else X
    D = _pairwise_dist(S, S)
    return _silhouette_from_matrix(D, lab, k)


def davies_bouldin(
    points,
    labels: Sequence[int],
    centroids: Optional[np.ndarray] = None,
    weights: Optional[Sequence[float]] = None,
) -> float:
    """Davies-Bouldin index: mean over clusters of the worst dispersion ratio.

    Lower is better.  Raises DegenerateAnalysisError when two centroids
    coincide, which marks the clustering itself as degenerate.
    """
    X, _ = _coerce_points(points, None)
    lab = np.asarray(labels, dtype=np.int64)
    k = int(lab.max()) + 1
    if k < 2:
        raise DegenerateAnalysisError("davies_bouldin needs >= 2 clusters")
    if centroids is None:
        centroids = np.vstack([X[lab == j].mean(axis=0) for j in range(k)])
    S = _scale(X, weights) if weights is not None else X
    C = _scale(np.asarray(centroids, dtype=float), weights) if weights is not None else np.asarray(centroids, dtype=float)
    spread = np.array([
        float(np.sqrt(((S[lab == j] - C[j]) ** 2).sum(axis=1)).mean()) for j in range(k)
    ])
    cd = _pairwise_dist(C, C)
    off = ~np.eye(k, dtype=bool)
    if np.any(cd[off] <= 1e-12):
        raise DegenerateAnalysisError("coincident centroids")
    ratios = (spread[:, None] + spread[None, :]) / np.where(off, cd, np.inf)
    return float(ratios.max(axis=1).mean())


# ----- model selection ------------------------------------------------------------


def select_k(points, params: ClusterParams, ids: Optional[Sequence[str]] = None) -> ClusterModel:
    """Fit every k in k_range and keep the silhouette maximizer.

    Silhouette ties within 1e-6 resolve to the lower Davies-Bouldin value,
    then to the smaller k.  The per-k index table rides along on the model.
    """
    X, user_ids = _coerce_points(points, ids)
    n_distinct = len(np.unique(X, axis=0))
    k_lo, k_hi = params.k_range
    k_hi = min(k_hi, n_distinct)
    if k_hi < k_lo:
        raise DegenerateAnalysisError(
            f"not enough distinct points ({n_distinct}) for k >= {k_lo}"
        )
    table: list[dict] = []
    models: dict[int, ClusterModel] = {}
    for k in range(k_lo, k_hi + 1):
        model = kmeans(X, k, params, ids=user_ids)
        models[k] = model
        table.append(
            {
                "k": k,
                "silhouette": model.silhouette,
                "davies_bouldin": model.davies_bouldin,
                "inertia": model.inertia,
            }
        )
    best_k = None
    for row in table:
        if best_k is None:
            best_k = row["k"]
            continue
        cur = next(r for r in table if r["k"] == best_k)
        if row["silhouette"] > cur["silhouette"] + _TIE_TOL:
            best_k = row["k"]
        elif abs(row["silhouette"] - cur["silhouette"]) <= _TIE_TOL:
            if row["davies_bouldin"] < cur["davies_bouldin"] - _TIE_TOL:
                best_k = row["k"]
            # equal on both indices: keep the smaller k already held
    chosen = models[best_k]
    chosen.k_table = tuple(table)
    return chosen


# ----- hyperparameter search --------------------------------------------------------


@dataclass(frozen=True)
class HyperGrid:
    stiffness_values: tuple[float, ...]
    weight_triples: tuple[tuple[float, float, float], ...]

    def cells(self) -> list[tuple[float, tuple[float, float, float]]]:
        return [(s, w) for s in self.stiffness_values for w in self.weight_triples]


def default_grid() -> HyperGrid:
    """5 contrast stiffnesses x 4 opinion weights (remainder split over sources)."""
    opinion_weights = (0.4, 0.5, 0.6, 0.7)
    triples = tuple(
        (w, round((1.0 - w) / 2.0, 12), round((1.0 - w) / 2.0, 12))
        for w in opinion_weights
    )
    return HyperGrid(stiffness_values=(0.25, 0.33, 0.5, 1.0, 2.0), weight_triples=triples)


@dataclass
class TuneResult:
    stiffness: float
    weights: tuple[float, float, float]
    model: ClusterModel
    report: tuple[dict, ...]


def tune_hyperparams(
    raw_vectors, grid: Optional[HyperGrid] = None, params: Optional[ClusterParams] = None
) -> TuneResult:
    """Grid-search contrast stiffness and axis weights; winner by silhouette.

    Ties fall back to Davies-Bouldin, then to grid order.  The full report is
    kept so a near-tie is visible to the caller rather than silently dropped.
    """
    from .factors import feature_matrix  # local import avoids a cycle

    grid = grid if grid is not None else default_grid()
    params = params if params is not None else ClusterParams()
    rows: list[dict] = []
    best: Optional[tuple[float, tuple, ClusterModel]] = None
    for stiff, weights in grid.cells():
        ids, X = feature_matrix(list(raw_vectors), stiff)
        cell_params = replace(params, stiffness=stiff, weights=weights)
        model = select_k(X, cell_params, ids=ids)
        rows.append(
            {
                "stiffness": stiff,
                "weights": weights,
                "k": model.k,
                "silhouette": model.silhouette,
                "davies_bouldin": model.davies_bouldin,
            }
        )
        if best is None:
            best = (stiff, weights, model)
        else:
            cur = best[2]
            if model.silhouette > cur.silhouette + _TIE_TOL or (
                abs(model.silhouette - cur.silhouette) <= _TIE_TOL
                and model.davies_bouldin < cur.davies_bouldin - _TIE_TOL
            ):
                best = (stiff, weights, model)
    return TuneResult(stiffness=best[0], weights=best[1], model=best[2], report=tuple(rows))


# ----- partition agreement -----------------------------------------------------------


def adjusted_rand_index(labels_a: Sequence, labels_b: Sequence) -> float:
    """Chance-corrected agreement between two partitions of the same items."""
    if len(labels_a) != len(labels_b):
        raise DataError("partitions must cover the same items")
    n = len(labels_a)
    if n == 0:
        raise DataError("empty partitions")
    contingency: dict[tuple, int] = {}
    rows: dict[object, int] = {}
    cols: dict[object, int] = {}
    for a, b in zip(labels_a, labels_b):
        contingency[(a, b)] = contingency.get((a, b), 0) + 1
        rows[a] = rows.get(a, 0) + 1
        cols[b] = cols.get(b, 0) + 1

    def comb2(x: int) -> int:
        return x * (x - 1) // 2

    sum_ij = sum(comb2(v) for v in contingency.values())
    sum_a = sum(comb2(v) for v in rows.values())
    sum_b = sum(comb2(v) for v in cols.values())
    total = comb2(n)
    expected = sum_a * sum_b / total if total else 0.0
    max_index = (sum_a + sum_b) / 2.0
    denom = max_index - expected
    if denom == 0:
        return 1.0
    return float((sum_ij - expected) / denom)
