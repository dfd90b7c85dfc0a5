"""Timeline rendering: ticks, series, gaps."""

import numpy as np

from plotviz import load_frame_series, render_timeline

from helpers import frames_csv


def series_from(tmp_path, rows, name="run"):
    return load_frame_series(frames_csv(tmp_path / f"{name}.csv", rows), name)


class TestTimelineFigure:
    def test_one_tick_per_frame(self, tmp_path):
        rows = [(i, 4 if i < 3 else 2, "polarized") for i in range(15)]
        ax = render_timeline([series_from(tmp_path, rows)]).axes[0]
        assert list(ax.get_xticks()) == list(range(15))

    def test_constant_count_draws_flat_line(self, tmp_path):
        rows = [(i, 3, "balanced") for i in range(6)]
        ax = render_timeline([series_from(tmp_path, rows)]).axes[0]
        (line,) = ax.lines
        assert set(line.get_ydata()) == {3.0}

    def test_overlay_draws_one_series_per_table(self, tmp_path):
        first = series_from(tmp_path, [(0, 2, "p"), (1, 2, "p")], name="first")
        second = series_from(tmp_path, [(0, 4, "p"), (1, 3, "p")], name="second")
        ax = render_timeline([first, second]).axes[0]
        assert len(ax.lines) == 2
        labels = [t.get_text() for t in ax.get_legend().get_texts()]
        assert labels == ["first", "second"]

    def test_degenerate_frame_appears_as_gap_not_zero(self, tmp_path):
        rows = [(0, 4, "p"), (1, None, "unstructured"), (2, 2, "p")]
        ax = render_timeline([series_from(tmp_path, rows)]).axes[0]
        ydata = ax.lines[0].get_ydata()
        assert np.isnan(ydata[1])
        assert ydata[0] == 4.0 and ydata[2] == 2.0

    def test_ticks_cover_the_union_of_overlaid_frames(self, tmp_path):
        short = series_from(tmp_path, [(0, 2, "p"), (1, 2, "p")], name="short")
        long = series_from(
            tmp_path, [(i, 3, "p") for i in range(5)], name="long"
        )
        ax = render_timeline([short, long]).axes[0]
        assert list(ax.get_xticks()) == list(range(5))
