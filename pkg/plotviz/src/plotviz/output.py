"""Figure serialization with reproducible bytes for vector formats."""

from __future__ import annotations

import io
import os

import matplotlib
from matplotlib.figure import Figure

from .errors import UsageError
from .style import Style

IMAGE_FORMATS = {".svg", ".png", ".pdf"}

# vector formats embed a creation date by default; strip it so re-renders
# of the same input are byte-identical
_METADATA = {".svg": {"Date": None}, ".pdf": {"CreationDate": None}}

_HTML_SHELL = """<!doctype html>
<meta charset="utf-8">
<title>{title}</title>
<body style="margin:0;display:grid;place-items:center;min-height:100vh">
{svg}
</body>
"""


def _render_svg(fig: Figure, style: Style) -> str:
    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": style.svg_hashsalt}):
        fig.savefig(buf, format="svg", metadata=_METADATA[".svg"])
    return buf.getvalue()


def save_figure(
    fig: Figure, path: str, style: Style = Style(), allow_html: bool = False
) -> None:
    ext = os.path.splitext(path)[1].lower()
    if ext == ".html":
        if not allow_html:
            raise UsageError(f"{path}: HTML output is only supported for sankey")
        svg = _render_svg(fig, style)
        title = os.path.splitext(os.path.basename(path))[0]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_HTML_SHELL.format(title=title, svg=svg))
        return
    if ext not in IMAGE_FORMATS:
        supported = sorted(IMAGE_FORMATS | ({".html"} if allow_html else set()))
        raise UsageError(f"{path}: unsupported output format (use {supported})")
    with matplotlib.rc_context({"svg.hashsalt": style.svg_hashsalt}):
        fig.savefig(path, dpi=style.dpi, metadata=_METADATA.get(ext))
