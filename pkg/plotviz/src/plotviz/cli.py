"""Command-line interface.

Subcommands: ``scatter`` (3-D factor scatter from a cluster report),
``timeline`` (cluster count per frame from one or more frame tables),
``sankey`` (membership flow diagram from a flow graph).

Exit codes: 0 success, 1 usage error, 2 artifact error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .artifacts import load_cluster_report, load_flow_graph, load_frame_series
from .errors import ArtifactError, PlotvizError, UsageError
from .output import save_figure
from .sankey import render_sankey
from .scatter import render_scatter
from .style import PlotBundle, Style
from .timeline import render_timeline


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad options; route through UsageError
    # so the documented usage exit code (1) holds.
    def error(self, message: str):
        raise UsageError(message)


def _series_name(path: str, taken: set[str]) -> str:
    # prefer the run directory; artifact basenames are usually all alike
    parent = os.path.basename(os.path.dirname(os.path.abspath(path)))
    name = parent or os.path.splitext(os.path.basename(path))[0]
    candidate, n = name, 2
    while candidate in taken:
        candidate = f"{name} ({n})"
        n += 1
    taken.add(candidate)
    return candidate


def render_bundle(bundle: PlotBundle) -> None:
    if bundle.kind == "scatter":
        report = load_cluster_report(bundle.inputs[0])
        fig = render_scatter(report, bundle.style)
        save_figure(fig, bundle.output, bundle.style)
        print(
            f"wrote {bundle.output} "
            f"({len(report.groups)} clusters, {report.n_users} users)"
        )
    elif bundle.kind == "timeline":
        taken: set[str] = set()
        series = [
            load_frame_series(path, _series_name(path, taken))
            for path in bundle.inputs
        ]
        fig = render_timeline(series, bundle.style)
        save_figure(fig, bundle.output, bundle.style)
        frames = max(len(s.frames) for s in series)
        print(f"wrote {bundle.output} ({len(series)} series, {frames} frames)")
    elif bundle.kind == "sankey":
        graph = load_flow_graph(bundle.inputs[0])
        fig = render_sankey(graph, bundle.style)
        save_figure(fig, bundle.output, bundle.style, allow_html=True)
        print(
            f"wrote {bundle.output} "
            f"({len(graph.frames())} frames, {len(graph.links)} links)"
        )
    else:  # pragma: no cover - the parser restricts kinds
        raise UsageError(f"unknown plot kind {bundle.kind!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="render", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="kind", metavar="kind", required=True)

    p = sub.add_parser("scatter", help="3-D factor scatter from a cluster report JSON")
    p.add_argument("artifact", help="cluster report JSON")
    p.add_argument("-o", "--out", required=True, help="output image (.svg/.png/.pdf)")

    p = sub.add_parser("timeline", help="cluster count per frame from frame table CSVs")
    p.add_argument(
        "artifact", nargs="+", help="frame table CSV (repeat to overlay runs)"
    )
    p.add_argument("-o", "--out", required=True, help="output image (.svg/.png/.pdf)")

    p = sub.add_parser("sankey", help="membership flow diagram from a flow graph JSON")
    p.add_argument("artifact", help="flow graph JSON")
    p.add_argument(
        "-o", "--out", required=True, help="output image (.svg/.png/.pdf/.html)"
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        inputs = args.artifact if isinstance(args.artifact, list) else [args.artifact]
        render_bundle(PlotBundle(kind=args.kind, inputs=tuple(inputs), output=args.out))
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ArtifactError as exc:
        print(f"artifact error: {exc}", file=sys.stderr)
        return 2
    except PlotvizError as exc:  # any future subtype defaults to an artifact problem
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
