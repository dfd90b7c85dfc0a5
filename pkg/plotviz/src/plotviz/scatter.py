"""3-D scatter of per-user raw factors, one color and legend entry per cluster."""

from __future__ import annotations

from matplotlib import colormaps
from matplotlib.figure import Figure

from .artifacts import ClusterReport
from .style import Style


def render_scatter(report: ClusterReport, style: Style = Style()) -> Figure:
    """One point per user at (opinion, source-pos, source-neg), colored by
    cluster, with each legend entry carrying the cluster's population share."""
    fig = Figure(figsize=(7.5, 6.0))
    ax = fig.add_subplot(projection="3d")
    palette = colormaps["tab10"]
    for group, share in zip(report.groups, report.shares()):
        ax.scatter(
            group.points[:, 0],
            group.points[:, 1],
            group.points[:, 2],
            s=style.marker_size,
            color=palette(group.index % 10),
            depthshade=False,
            label=f"{group.label} ({share:.1f}%)",
        )
    ax.set_xlabel(style.axis_labels[0])
    ax.set_ylabel(style.axis_labels[1])
    ax.set_zlabel(style.axis_labels[2])
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_zlim(-0.02, 1.02)
    ax.view_init(elev=20, azim=-60)  # fixed view: identical inputs, identical bytes
    ax.legend(loc="upper left", framealpha=0.9)
    if report.debate_name:
        ax.set_title(report.debate_name)
    return fig
