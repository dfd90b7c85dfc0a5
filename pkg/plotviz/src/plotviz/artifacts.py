"""Readers and validators for the engine's exported artifacts.

Three artifact shapes are consumed: the cluster report JSON (per-user raw
factors plus per-cluster summaries), the frame table CSV (one row per
sliding-window frame), and the flow graph JSON (per-frame cluster nodes
joined by inter-frame migration counts). Every reader validates structure
and internal consistency before returning; a figure drawn from a malformed
artifact misleads, so nothing here loads leniently.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArtifactError, ConservationError

SUPPORTED_SCHEMA = "1"


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise ArtifactError(f"{path}: expected a JSON object at top level")
    return payload


def _check_schema(payload: dict, path: str) -> None:
    version = payload.get("schema_version")
    if str(version) != SUPPORTED_SCHEMA:
        raise ArtifactError(
            f"{path}: unsupported schema_version {version!r} "
            f"(supported: {SUPPORTED_SCHEMA})"
        )


def _as_count(value, path: str, what: str) -> int:
    # bool is an int subclass; a true/false count is a schema bug, not a tally
    if not isinstance(value, int) or isinstance(value, bool):
        raise ArtifactError(f"{path}: {what} must be an integer, got {value!r}")
    return value


def _as_unit_float(value, path: str, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ArtifactError(f"{path}: {what} must be a number, got {value!r}")
    out = float(value)
    if math.isnan(out) or out < 0.0 or out > 1.0:
        raise ArtifactError(f"{path}: {what} must lie in [0, 1], got {out!r}")
    return out


# ----- cluster report (scatter input) ---------------------------------------------------


@dataclass(frozen=True)
class ClusterGroup:
    """One cluster with the raw factor coordinates of its members."""

    index: int
    label: str
    size: int
    points: np.ndarray  # (size, 3): opinion, source_pos, source_neg

    @property
    def share(self) -> float:
        return self.size


@dataclass(frozen=True)
class ClusterReport:
    """Validated scatter input: every user bound to a known cluster."""

    debate_name: str
    groups: tuple[ClusterGroup, ...]

    @property
    def n_users(self) -> int:
        return sum(g.size for g in self.groups)

    def shares(self) -> list[float]:
        total = self.n_users
        return [100.0 * g.size / total for g in self.groups]


def load_cluster_report(path: str) -> ClusterReport:
    payload = _read_json(path)
    _check_schema(payload, path)
    clusters = payload.get("clusters")
    users = payload.get("users")
    if not isinstance(clusters, list) or not clusters:
        raise ArtifactError(f"{path}: needs a non-empty 'clusters' list")
    if not isinstance(users, list) or not users:
        raise ArtifactError(f"{path}: needs a non-empty 'users' list")

    meta: dict[int, tuple[str, int]] = {}
    for row in clusters:
        if not isinstance(row, dict):
            raise ArtifactError(f"{path}: cluster entries must be objects")
        idx = _as_count(row.get("cluster"), path, "cluster index")
        if idx in meta:
            raise ArtifactError(f"{path}: duplicate cluster index {idx}")
        label = row.get("label")
        if not isinstance(label, str) or not label:
            raise ArtifactError(f"{path}: cluster {idx} needs a string label")
        size = _as_count(row.get("size"), path, f"cluster {idx} size")
        if size < 1:
            raise ArtifactError(f"{path}: cluster {idx} has size {size}")
        meta[idx] = (label, size)

    points: dict[int, list[list[float]]] = {idx: [] for idx in meta}
    for row in users:
        if not isinstance(row, dict):
            raise ArtifactError(f"{path}: user entries must be objects")
        idx = _as_count(row.get("cluster"), path, "user cluster index")
        if idx not in meta:
            raise ArtifactError(
                f"{path}: user {row.get('user_id')!r} references unknown cluster {idx}"
            )
        coord = [
            _as_unit_float(row.get(key), path, f"user {key}")
            for key in ("opinion", "source_pos", "source_neg")
        ]
        points[idx].append(coord)

    groups = []
    for idx in sorted(meta):
        label, size = meta[idx]
        got = len(points[idx])
        if got != size:
            raise ArtifactError(
                f"{path}: cluster {idx} declares size {size} but has {got} users"
            )
        groups.append(
            ClusterGroup(
                index=idx,
                label=label,
                size=size,
                points=np.asarray(points[idx], dtype=float),
            )
        )
    debate = payload.get("debate_name")
    return ClusterReport(
        debate_name=debate if isinstance(debate, str) else "",
        groups=tuple(groups),
    )


# ----- frame table (timeline input) ------------------------------------------------------

FRAME_COLUMNS = (
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


@dataclass(frozen=True)
class FrameSeries:
    """One run's per-frame cluster counts; NaN where a frame was degenerate."""

    name: str
    frames: np.ndarray  # int frame indices, strictly increasing
    k: np.ndarray  # float; NaN marks a frame with no stable clustering
    period_types: tuple[str, ...]


def load_frame_series(path: str, name: str) -> FrameSeries:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            rows = list(reader)
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from None
    if header is None or not set(FRAME_COLUMNS) <= set(header):
        missing = sorted(set(FRAME_COLUMNS) - set(header or ()))
        raise ArtifactError(f"{path}: frame table missing columns {missing}")
    if not rows:
        raise ArtifactError(f"{path}: frame table has no rows")

    frames: list[int] = []
    counts: list[float] = []
    types: list[str] = []
    for row in rows:
        try:
            frame = int(row["frame"])
        except (TypeError, ValueError):
            raise ArtifactError(
                f"{path}: bad frame index {row.get('frame')!r}"
            ) from None
        if frames and frame <= frames[-1]:
            raise ArtifactError(f"{path}: frame indices must strictly increase")
        raw_k = (row["k"] or "").strip()
        if raw_k:
            try:
                k = int(raw_k)
            except ValueError:
                raise ArtifactError(f"{path}: bad cluster count {raw_k!r}") from None
            if k < 1:
                raise ArtifactError(f"{path}: cluster count must be positive, got {k}")
            counts.append(float(k))
        else:
            counts.append(float("nan"))  # degenerate frame: gap, not zero
        frames.append(frame)
        types.append(row["period_type"])
    return FrameSeries(
        name=name,
        frames=np.asarray(frames, dtype=int),
        k=np.asarray(counts, dtype=float),
        period_types=tuple(types),
    )


# ----- flow graph (sankey input) ----------------------------------------------------------


@dataclass(frozen=True)
class FlowNode:
    id: str
    frame: int
    cluster: int
    label: str
    size: int


@dataclass(frozen=True)
class FlowLink:
    source: str
    target: str
    count: int


@dataclass(frozen=True)
class FlowGraph:
    """Validated flow diagram input; conservation already proven."""

    nodes: tuple[FlowNode, ...]
    links: tuple[FlowLink, ...]
    entering: dict[str, int] = field(default_factory=dict)
    leaving: dict[str, int] = field(default_factory=dict)

    def frames(self) -> list[int]:
        return sorted({n.frame for n in self.nodes})

    def at(self, frame: int) -> list[FlowNode]:
        return sorted(
            (n for n in self.nodes if n.frame == frame), key=lambda n: n.cluster
        )


def _check_conservation(graph: FlowGraph, path: str) -> None:
    """Every user in a frame either flows to the next linked frame or is
    tallied as leaving; every user in that next frame either flowed in or is
    tallied as entering. Checked per node, in integers, no tolerance."""
    by_id = {n.id: n for n in graph.nodes}
    outgoing: dict[str, int] = {}
    incoming: dict[str, int] = {}
    for link in graph.links:
        outgoing[link.source] = outgoing.get(link.source, 0) + link.count
        incoming[link.target] = incoming.get(link.target, 0) + link.count

    present = set(graph.frames())
    for node in graph.nodes:
        if node.frame + 1 in present:
            flow_out = outgoing.get(node.id, 0) + graph.leaving.get(node.id, 0)
            if flow_out != node.size:
                raise ConservationError(
                    f"{path}: node {node.id} holds {node.size} users but "
                    f"{flow_out} flow out (links + leaving)"
                )
        if node.frame - 1 in present:
            flow_in = incoming.get(node.id, 0) + graph.entering.get(node.id, 0)
            if flow_in != node.size:
                raise ConservationError(
                    f"{path}: node {node.id} holds {node.size} users but "
                    f"{flow_in} flow in (links + entering)"
                )
    # tallies must not reference nodes that have no adjacent linked frame
    for key in set(graph.leaving) | set(graph.entering):
        if key not in by_id:
            raise ConservationError(f"{path}: tally references unknown node {key!r}")


def load_flow_graph(path: str) -> FlowGraph:
    payload = _read_json(path)
    _check_schema(payload, path)
    raw_nodes = payload.get("nodes")
    raw_links = payload.get("links")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise ArtifactError(f"{path}: needs a non-empty 'nodes' list")
    if not isinstance(raw_links, list):
        raise ArtifactError(f"{path}: needs a 'links' list")

    nodes: list[FlowNode] = []
    seen: set[str] = set()
    for row in raw_nodes:
        if not isinstance(row, dict):
            raise ArtifactError(f"{path}: node entries must be objects")
        node_id = row.get("id")
        if not isinstance(node_id, str) or not node_id:
            raise ArtifactError(f"{path}: node needs a string id, got {node_id!r}")
        if node_id in seen:
            raise ArtifactError(f"{path}: duplicate node id {node_id!r}")
        seen.add(node_id)
        label = row.get("label")
        if not isinstance(label, str) or not label:
            raise ArtifactError(f"{path}: node {node_id} needs a string label")
        size = _as_count(row.get("size"), path, f"node {node_id} size")
        if size < 1:
            raise ArtifactError(f"{path}: node {node_id} has size {size}")
        nodes.append(
            FlowNode(
                id=node_id,
                frame=_as_count(row.get("frame"), path, f"node {node_id} frame"),
                cluster=_as_count(row.get("cluster"), path, f"node {node_id} cluster"),
                label=label,
                size=size,
            )
        )

    by_id = {n.id: n for n in nodes}
    links: list[FlowLink] = []
    for row in raw_links:
        if not isinstance(row, dict):
            raise ArtifactError(f"{path}: link entries must be objects")
        source, target = row.get("source"), row.get("target")
        for end in (source, target):
            if end not in by_id:
                raise ArtifactError(f"{path}: link references unknown node {end!r}")
        count = _as_count(row.get("count"), path, f"link {source}->{target} count")
        if count < 1:
            raise ArtifactError(
                f"{path}: link {source}->{target} has count {count}"
            )
        if by_id[target].frame != by_id[source].frame + 1:
            raise ArtifactError(
                f"{path}: link {source}->{target} must join consecutive frames"
            )
        links.append(FlowLink(source=source, target=target, count=count))

    def tally(key: str) -> dict[str, int]:
        raw = payload.get(key, {})
        if not isinstance(raw, dict):
            raise ArtifactError(f"{path}: '{key}' must be an object")
        out: dict[str, int] = {}
        for node_id, count in raw.items():
            count = _as_count(count, path, f"{key}[{node_id}]")
            if count < 1:
                raise ArtifactError(f"{path}: {key}[{node_id}] has count {count}")
            out[node_id] = count
        return out

    graph = FlowGraph(
        nodes=tuple(nodes),
        links=tuple(links),
        entering=tally("entering"),
        leaving=tally("leaving"),
    )
    _check_conservation(graph, path)
    return graph
