"""Tiny artifact builders for renderer tests.

These write files shaped like the engine's exports without involving the
engine, so unit tests stay fast; the acceptance tests use real artifacts
generated through the engine's CLI instead.
"""

from __future__ import annotations

import json


def write_json(path, payload: dict) -> str:
    path = str(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    return path


def cluster_report_payload(
    groups: dict[int, tuple[str, list[tuple[float, float, float]]]],
    schema: str = "1",
    debate: str = "toy",
) -> dict:
    """groups: cluster index -> (label, list of (opinion, source_pos, source_neg))."""
    clusters = []
    users = []
    uid = 0
    for idx, (label, coords) in sorted(groups.items()):
        centroid = [
            sum(c[axis] for c in coords) / len(coords) for axis in range(3)
        ] if coords else [0.0, 0.0, 0.0]
        clusters.append(
            {
                "cluster": idx,
                "label": label,
                "size": len(coords),
                "centroid": centroid,
                "mean_opinion": centroid[0],
            }
        )
        for opinion, source_pos, source_neg in coords:
            users.append(
                {
                    "user_id": f"u{uid:05d}",
                    "cluster": idx,
                    "opinion": opinion,
                    "source_pos": source_pos,
                    "source_neg": source_neg,
                    "features": [opinion, source_pos, source_neg],
                }
            )
            uid += 1
    return {
        "schema_version": schema,
        "debate_name": debate,
        "k": len(clusters),
        "clusters": clusters,
        "users": users,
    }


def frames_csv(path, rows: list[tuple]) -> str:
    """rows: (frame, k or None, period_type) triples; other columns are filler."""
    path = str(path)
    lines = ["frame,start,end,truncated,n_users,k,silhouette,davies_bouldin,period_type"]
    for frame, k, period_type in rows:
        k_txt = "" if k is None else str(k)
        quality = "" if k is None else "0.9"
        lines.append(
            f"{frame},2022-01-01T00:00:00Z,2022-01-29T00:00:00Z,0,10,"
            f"{k_txt},{quality},{quality},{period_type}"
        )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def flow_payload(
    sizes: dict[int, dict[int, tuple[str, int]]],
    flows: dict[tuple[str, str], int],
    schema: str = "1",
) -> dict:
    """sizes: frame -> {cluster: (label, size)}; flows keyed by node id pairs.

    Entering/leaving tallies are derived so conservation holds by
    construction; corrupt the result afterwards to test rejection.
    """
    nodes = []
    for frame, clusters in sorted(sizes.items()):
        for cluster, (label, size) in sorted(clusters.items()):
            nodes.append(
                {
                    "id": f"f{frame}c{cluster}",
                    "frame": frame,
                    "cluster": cluster,
                    "label": label,
                    "size": size,
                }
            )
    links = [
        {"source": source, "target": target, "count": count}
        for (source, target), count in sorted(flows.items())
    ]
    outgoing: dict[str, int] = {}
    incoming: dict[str, int] = {}
    for link in links:
        outgoing[link["source"]] = outgoing.get(link["source"], 0) + link["count"]
        incoming[link["target"]] = incoming.get(link["target"], 0) + link["count"]
    frames_present = {n["frame"] for n in nodes}
    entering: dict[str, int] = {}
    leaving: dict[str, int] = {}
    for node in nodes:
        nid, size = node["id"], node["size"]
        if node["frame"] + 1 in frames_present:
            rest = size - outgoing.get(nid, 0)
            if rest:
                leaving[nid] = rest
        if node["frame"] - 1 in frames_present:
            rest = size - incoming.get(nid, 0)
            if rest:
                entering[nid] = rest
    return {
        "schema_version": schema,
        "nodes": nodes,
        "links": links,
        "entering": entering,
        "leaving": leaving,
    }
