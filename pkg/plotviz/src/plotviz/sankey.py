"""Flow diagram of cluster membership across consecutive frames.

Nodes are per-frame clusters with height proportional to population; bands
carry the migration counts between consecutive frames. Users who drop out
of (or join) the active set between two frames taper off as gray stubs, so
every node's height is visibly accounted for.
"""

from __future__ import annotations

from matplotlib.figure import Figure
from matplotlib.patches import PathPatch, Polygon, Rectangle
from matplotlib.path import Path

from .artifacts import FlowGraph
from .style import Style, label_color, label_sort_key

NODE_HALF_W = 0.16  # half-width of a node rectangle, in frame units
STUB_LEN = 0.3  # horizontal reach of an entering/leaving taper
CHURN_COLOR = "#b0b0b0"


def _band(ax, x0, a0, a1, x1, b0, b1, color, alpha) -> None:
    # horizontal S-curve: cubic control points at the midpoint x
    xm = 0.5 * (x0 + x1)
    verts = [
        (x0, a0),
        (xm, a0),
        (xm, b0),
        (x1, b0),
        (x1, b1),
        (xm, b1),
        (xm, a1),
        (x0, a1),
        (x0, a0),
    ]
    codes = [
        Path.MOVETO,
        Path.CURVE4,
        Path.CURVE4,
        Path.CURVE4,
        Path.LINETO,
        Path.CURVE4,
        Path.CURVE4,
        Path.CURVE4,
        Path.CLOSEPOLY,
    ]
    ax.add_patch(
        PathPatch(Path(verts, codes), facecolor=color, alpha=alpha, lw=0, zorder=1)
    )


def render_sankey(graph: FlowGraph, style: Style = Style()) -> Figure:
    """Frame-ordered flow diagram; degenerate frames leave visible gaps."""
    frames = graph.frames()
    columns = {f: graph.at(f) for f in frames}
    totals = {f: sum(n.size for n in columns[f]) for f in frames}
    pad = 0.03 * max(totals.values())
    height = max(totals[f] + pad * (len(columns[f]) - 1) for f in frames)

    spans: dict[str, tuple[float, float]] = {}
    for f in frames:
        extent = totals[f] + pad * (len(columns[f]) - 1)
        y = 0.5 * (height - extent)  # columns vertically centered
        for node in columns[f]:
            spans[node.id] = (y, y + node.size)
            y += node.size + pad

    fig = Figure(
        figsize=(max(7.0, 0.95 * len(frames) + 1.8), 5.5), layout="constrained"
    )
    ax = fig.add_subplot()
    by_id = {n.id: n for n in graph.nodes}
    colors = {n.id: label_color(n.label) for n in graph.nodes}

    for node in graph.nodes:
        y0, _ = spans[node.id]
        ax.add_patch(
            Rectangle(
                (node.frame - NODE_HALF_W, y0),
                2 * NODE_HALF_W,
                node.size,
                facecolor=colors[node.id],
                edgecolor="black",
                lw=0.5,
                zorder=3,
            )
        )

    # band slots fill each node edge bottom-up in a fixed order, so the
    # layout is a pure function of the graph
    out_cursor = {nid: span[0] for nid, span in spans.items()}
    in_cursor = {nid: span[0] for nid, span in spans.items()}
    ordered = sorted(
        graph.links,
        key=lambda l: (by_id[l.source].frame, by_id[l.source].cluster, by_id[l.target].cluster),
    )
    for link in ordered:
        src, tgt = by_id[link.source], by_id[link.target]
        sa = out_cursor[link.source]
        out_cursor[link.source] = sa + link.count
        ta = in_cursor[link.target]
        in_cursor[link.target] = ta + link.count
        _band(
            ax,
            src.frame + NODE_HALF_W,
            sa,
            sa + link.count,
            tgt.frame - NODE_HALF_W,
            ta,
            ta + link.count,
            colors[link.source],
            style.link_alpha,
        )

    # conservation left exactly the tallied churn above the allocated slots
    for nid, count in sorted(graph.leaving.items()):
        node, y = by_id[nid], out_cursor[nid]
        x = node.frame + NODE_HALF_W
        ax.add_patch(
            Polygon(
                [(x, y), (x, y + count), (x + STUB_LEN, y + 0.5 * count)],
                facecolor=CHURN_COLOR,
                alpha=0.6,
                lw=0,
                zorder=1,
            )
        )
    for nid, count in sorted(graph.entering.items()):
        node, y = by_id[nid], in_cursor[nid]
        x = node.frame - NODE_HALF_W
        ax.add_patch(
            Polygon(
                [(x, y), (x, y + count), (x - STUB_LEN, y + 0.5 * count)],
                facecolor=CHURN_COLOR,
                alpha=0.6,
                lw=0,
                zorder=1,
            )
        )

    ax.set_xticks(frames)
    ax.set_xlim(frames[0] - 0.75, frames[-1] + 0.75)
    ax.set_ylim(-pad, height + pad)
    ax.set_yticks([])
    for side in ("left", "right", "top"):
        ax.spines[side].set_visible(False)
    ax.set_xlabel("frame")

    labels = sorted({n.label for n in graph.nodes}, key=label_sort_key)
    handles = [
        Rectangle((0, 0), 1, 1, facecolor=label_color(lab), edgecolor="black", lw=0.5)
        for lab in labels
    ]
    if graph.entering or graph.leaving:
        labels.append("entering/leaving")
        handles.append(Rectangle((0, 0), 1, 1, facecolor=CHURN_COLOR, alpha=0.6))
    fig.legend(handles, labels, loc="outside upper center", ncol=min(len(labels), 4))
    return fig
