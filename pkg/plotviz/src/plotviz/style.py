"""Fixed styling shared by all three figure families.

Determinism is a feature: identical inputs must render to identical bytes,
so every visual choice (colors, view angle, salt for SVG ids) is pinned
here rather than left to library defaults that may drift per call.
"""

from __future__ import annotations

from dataclasses import dataclass

# factor axes, in artifact column order
AXIS_LABELS = ("opinion", "source-pos", "source-neg")

# one fixed color per known cluster label; unknown labels fall back by index
LABEL_COLORS = {
    "polarized_pos": "#c0392b",
    "intermediate_pos": "#e38d75",
    "balanced": "#8e7cc3",
    "intermediate_neg": "#7fa7d4",
    "polarized_neg": "#2e6da4",
    "other": "#95a5a6",
}

# canonical legend order: positive pole to negative pole, then the rest
LABEL_ORDER = (
    "polarized_pos",
    "intermediate_pos",
    "balanced",
    "intermediate_neg",
    "polarized_neg",
    "other",
)

_FALLBACK = (
    "#6b4c9a",
    "#b58900",
    "#2aa198",
    "#d33682",
    "#859900",
    "#cb4b16",
)


def label_color(label: str) -> str:
    if label in LABEL_COLORS:
        return LABEL_COLORS[label]
    # unknown labels hash to a stable fallback color, same in node and legend
    return _FALLBACK[sum(label.encode()) % len(_FALLBACK)]


def label_sort_key(label: str) -> tuple[int, str]:
    try:
        return (LABEL_ORDER.index(label), label)
    except ValueError:
        return (len(LABEL_ORDER), label)


@dataclass(frozen=True)
class Style:
    axis_labels: tuple[str, str, str] = AXIS_LABELS
    marker_size: float = 10.0
    link_alpha: float = 0.4
    dpi: int = 150
    # salts matplotlib's generated SVG ids so re-renders are byte-identical
    svg_hashsalt: str = "plotviz"


@dataclass(frozen=True)
class PlotBundle:
    """One render job: input artifact paths bound to one output image."""

    kind: str  # "scatter" | "timeline" | "sankey"
    inputs: tuple[str, ...]
    output: str
    style: Style = Style()
