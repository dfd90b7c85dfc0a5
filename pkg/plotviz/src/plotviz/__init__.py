"""Batch renderer for polarscope's exported artifacts.

Reads only the engine's documented JSON/CSV exports; never imports the
engine. Three figure families: 3-D cluster scatter, cluster-count
timeline, and membership flow (sankey) diagrams.
"""

from .artifacts import (
    ClusterGroup,
    ClusterReport,
    FlowGraph,
    FlowLink,
    FlowNode,
    FrameSeries,
    load_cluster_report,
    load_flow_graph,
    load_frame_series,
)
from .errors import ArtifactError, ConservationError, PlotvizError, UsageError
from .output import save_figure
from .sankey import render_sankey
from .scatter import render_scatter
from .style import AXIS_LABELS, LABEL_COLORS, PlotBundle, Style, label_color
from .timeline import render_timeline

__version__ = "0.1.0"

__all__ = [
    "AXIS_LABELS",
    "ArtifactError",
    "ClusterGroup",
    "ClusterReport",
    "ConservationError",
    "FlowGraph",
    "FlowLink",
    "FlowNode",
    "FrameSeries",
    "LABEL_COLORS",
    "PlotBundle",
    "PlotvizError",
    "Style",
    "UsageError",
    "label_color",
    "load_cluster_report",
    "load_flow_graph",
    "load_frame_series",
    "render_sankey",
    "render_scatter",
    "render_timeline",
    "save_figure",
    "__version__",
]
