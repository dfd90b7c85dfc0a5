"""Step plot of cluster count per frame, one series per analysis run."""

from __future__ import annotations

from typing import Sequence

from matplotlib import colormaps
from matplotlib.figure import Figure
from matplotlib.ticker import MaxNLocator

import numpy as np

from .artifacts import FrameSeries
from .style import Style


def render_timeline(series: Sequence[FrameSeries], style: Style = Style()) -> Figure:
    """Cluster count vs frame index; one x tick per frame, integer y axis.
    Frames with no stable clustering appear as gaps, never as zero."""
    fig = Figure(figsize=(9.0, 4.5))
    ax = fig.add_subplot()
    palette = colormaps["tab10"]
    for i, run in enumerate(series):
        ax.step(
            run.frames,
            run.k,
            where="post",
            lw=1.8,
            marker=".",
            markersize=6,
            color=palette(i % 10),
            label=run.name,
        )
    ticks = np.unique(np.concatenate([run.frames for run in series]))
    ax.set_xticks(ticks)
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.set_ylim(bottom=0)
    ax.set_xlabel("frame")
    ax.set_ylabel("clusters")
    ax.grid(axis="y", alpha=0.3)
    ax.legend(loc="best", framealpha=0.9)
    return fig
