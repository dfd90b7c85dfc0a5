"""Acceptance gate: render the three artifacts of a fixed-seed analog run.

The golden fixtures come from the engine's own CLI (see conftest), so this
suite proves the full consumer contract: real exports in, figures out,
corrupted input refused.
"""

import json

from plotviz import (
    load_cluster_report,
    load_flow_graph,
    load_frame_series,
    render_sankey,
    render_scatter,
    render_timeline,
    save_figure,
)
from plotviz.cli import main

from helpers import write_json


def check(description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[secondary criterion] {status}: {description}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


class TestGoldenArtifacts:
    def test_scatter_has_one_legend_entry_per_cluster(self, golden, tmp_path):
        report = load_cluster_report(golden.clusters)
        fig = render_scatter(report)
        entries = fig.axes[0].get_legend().get_texts()
        out = tmp_path / "scatter.svg"
        save_figure(fig, str(out))
        check(
            "scatter renders with one legend entry per cluster",
            len(entries) == len(report.groups) and out.stat().st_size > 0,
            f"{len(entries)} entries for {len(report.groups)} clusters",
        )

    def test_timeline_has_one_tick_per_frame(self, golden, tmp_path):
        series = load_frame_series(golden.frames, "covid")
        fig = render_timeline([series])
        ticks = fig.axes[0].get_xticks()
        out = tmp_path / "timeline.svg"
        save_figure(fig, str(out))
        check(
            "timeline shows 15 frame ticks",
            len(ticks) == 15 and out.stat().st_size > 0,
            f"{len(ticks)} ticks",
        )

    def test_sankey_renders_without_conservation_errors(self, golden, tmp_path):
        graph = load_flow_graph(golden.sankey)  # validation happens here
        fig = render_sankey(graph)
        out = tmp_path / "sankey.svg"
        save_figure(fig, str(out))
        check(
            "flow diagram renders from a conservation-clean artifact",
            out.stat().st_size > 0,
            f"{len(graph.frames())} frames, {len(graph.links)} links",
        )

    def test_corrupted_links_fixture_is_rejected(self, golden, tmp_path):
        payload = json.load(open(golden.sankey, encoding="utf-8"))
        payload["links"][0]["count"] += 1
        corrupted = write_json(tmp_path / "corrupted_sankey.json", payload)
        out = tmp_path / "should_not_exist.svg"
        code = main(["sankey", corrupted, "-o", str(out)])
        check(
            "corrupted-links fixture is refused",
            code == 2 and not out.exists(),
            f"exit {code}",
        )
