"""End-to-end command-line runs, in process, against a small scenario."""

import json
import os

import pytest

from polarscope import scenario_to_dict
from polarscope.cli import main
from polarscope.synth import (
    Archetype,
    Scenario,
    SourceProfile,
)

from helpers import toy_config

ZIPF = SourceProfile("zipf", 1.0)
SINGLE = SourceProfile("single")

# 59-day span, 28d window at 14d steps: frames start at days 0/14/28/42,
# the last one truncated at day 59, giving 4 frames.
SMALL_SPAN = ("2022-01-01T00:00:00Z", "2022-03-01T00:00:00Z")


def small_scenario() -> Scenario:
    return Scenario(
        name="small",
        config=toy_config(),
        n_users=60,
        timespan=__import__("polarscope").parse_timespan(*SMALL_SPAN),
        archetypes=(
            Archetype("polarized_pos", 0.5, (1.0, 0.0), ZIPF, SINGLE, 3.0),
            Archetype("polarized_neg", 0.5, (0.0, 1.0), SINGLE, ZIPF, 3.0),
        ),
    )


@pytest.fixture(scope="module")
def scenario_path(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("scenario") / "small.json"
    path.write_text(json.dumps(scenario_to_dict(small_scenario())))
    return str(path)


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory, scenario_path) -> str:
    out = str(tmp_path_factory.mktemp("synth"))
    assert main(["synth", "--scenario", scenario_path, "--seed", "7", "--out", out]) == 0
    return out


def analysis_args(synth_dir: str) -> list[str]:
    return [
        "--log", os.path.join(synth_dir, "log.jsonl"),
        "--config", os.path.join(synth_dir, "debate_config.json"),
        "--start", SMALL_SPAN[0],
        "--end", SMALL_SPAN[1],
        "--stiffness", "0.5",
    ]


class TestSynth:
    def test_writes_all_artifacts_and_a_valid_manifest(self, synth_dir):
        for name in (
            "log.jsonl",
            "debate_config.json",
            "ground_truth.json",
            "scenario.json",
            "manifest.json",
        ):
            assert os.path.exists(os.path.join(synth_dir, name)), name
        assert main(["report", "--dir", synth_dir, "--verify"]) == 0

    def test_manifest_records_parameters_without_timestamps(self, synth_dir):
        manifest = json.load(open(os.path.join(synth_dir, "manifest.json")))
        assert manifest["command"] == "synth"
        assert manifest["parameters"]["seed"] == 7
        assert set(manifest["artifacts"]) == {
            "log.jsonl", "debate_config.json", "ground_truth.json", "scenario.json"
        }
        assert not any("time" in k or "date" in k for k in manifest)

    def test_same_seed_runs_are_byte_identical(self, tmp_path, scenario_path):
        outs = []
        for sub in ("a", "b"):
            out = str(tmp_path / sub)
            rc = main(["synth", "--scenario", scenario_path, "--seed", "3", "--out", out])
            assert rc == 0
            outs.append(out)
        for name in ("log.jsonl", "ground_truth.json", "manifest.json"):
            a = open(os.path.join(outs[0], name), "rb").read()
            b = open(os.path.join(outs[1], name), "rb").read()
            assert a == b, name

    def test_csv_format(self, tmp_path, scenario_path):
        out = str(tmp_path / "csv")
        rc = main(
            ["synth", "--scenario", scenario_path, "--seed", "1", "--format", "csv",
             "--out", out]
        )
        assert rc == 0
        header = open(os.path.join(out, "log.csv")).readline().strip()
        assert header.split(",")[0] == "user_id"

    def test_preset_and_scenario_are_mutually_exclusive(self, tmp_path, scenario_path):
        out = str(tmp_path / "x")
        both = ["synth", "--preset", "static-2", "--scenario", scenario_path, "--out", out]
        assert main(both) == 1
        assert main(["synth", "--out", out]) == 1

    def test_unknown_preset_is_a_usage_error(self, tmp_path):
        assert main(["synth", "--preset", "nope", "--out", str(tmp_path / "x")]) == 1


class TestAggregate:
    def test_produces_cluster_artifacts(self, synth_dir, tmp_path):
        out = str(tmp_path / "agg")
        rc = main(["aggregate", *analysis_args(synth_dir), "--out", out])
        assert rc == 0
        for name in ("factors.csv", "clusters.json", "summary.json", "manifest.json"):
            assert os.path.exists(os.path.join(out, name)), name
        clusters = json.load(open(os.path.join(out, "clusters.json")))
        assert clusters["k"] == 2
        assert len(clusters["users"]) == 60
        labels = {c["label"] for c in clusters["clusters"]}
        assert labels == {"polarized_pos", "polarized_neg"}
        assert main(["report", "--dir", out, "--verify"]) == 0

    def test_tune_records_the_grid_search(self, synth_dir, tmp_path):
        out = str(tmp_path / "tuned")
        rc = main(
            ["aggregate", *analysis_args(synth_dir), "--tune",
             "--k-min", "2", "--k-max", "3", "--restarts", "5", "--out", out]
        )
        assert rc == 0
        clusters = json.load(open(os.path.join(out, "clusters.json")))
        tuning = clusters["tuning"]
        assert len(tuning["cells"]) == 20
        assert tuning["stiffness"] in {0.25, 0.33, 0.5, 1.0, 2.0}
        assert clusters["params"]["stiffness"] == tuning["stiffness"]

    def test_degenerate_clustering_exits_three(self, synth_dir, tmp_path):
        # two archetypes give only a handful of distinct feature points; a
        # k floor above that count cannot be met
        out = str(tmp_path / "degen")
        rc = main(
            ["aggregate", *analysis_args(synth_dir),
             "--k-min", "61", "--k-max", "61", "--out", out]
        )
        assert rc == 3

    def test_missing_log_is_a_data_error(self, synth_dir, tmp_path):
        args = analysis_args(synth_dir)
        args[1] = os.path.join(synth_dir, "absent.jsonl")
        assert main(["aggregate", *args, "--out", str(tmp_path / "x")]) == 2


class TestTemporal:
    def test_produces_frame_and_period_artifacts(self, synth_dir, tmp_path):
        out = str(tmp_path / "tmp")
        rc = main(["temporal", *analysis_args(synth_dir), "--out", out])
        assert rc == 0
        for name in (
            "frames.json", "frames.csv", "periods.json", "sankey.json", "manifest.json"
        ):
            assert os.path.exists(os.path.join(out, name)), name
        frames = json.load(open(os.path.join(out, "frames.json")))
        assert len(frames["frames"]) == 4
        assert frames["frames"][-1]["truncated"] is True
        periods = json.load(open(os.path.join(out, "periods.json")))
        assert periods["frame_types"] == ["polarized"] * 4
        assert len(periods["periods"]) == 1
        assert periods["convergence_trend"] is None
        assert "no convergence period" in periods["convergence_trend_error"]
        assert main(["report", "--dir", out, "--verify"]) == 0

    def test_jobs_do_not_change_the_result(self, synth_dir, tmp_path):
        outs = []
        for jobs in ("1", "3"):
            out = str(tmp_path / f"j{jobs}")
            rc = main(["temporal", *analysis_args(synth_dir), "--jobs", jobs, "--out", out])
            assert rc == 0
            outs.append(out)
        for name in ("frames.json", "periods.json", "sankey.json"):
            a = open(os.path.join(outs[0], name), "rb").read()
            b = open(os.path.join(outs[1], name), "rb").read()
            assert a == b, name

    def test_bad_duration_is_a_usage_error(self, synth_dir, tmp_path):
        out = str(tmp_path / "x")
        rc = main(["temporal", *analysis_args(synth_dir), "--window", "nope", "--out", out])
        assert rc == 1
        rc = main(
            ["temporal", *analysis_args(synth_dir),
             "--window", "7d", "--step", "14d", "--out", out]
        )
        assert rc == 1  # step exceeds window

    def test_hour_durations_are_accepted(self, synth_dir, tmp_path):
        out = str(tmp_path / "hours")
        rc = main(
            ["temporal", *analysis_args(synth_dir),
             "--window", "672h", "--step", "336h", "--out", out]
        )
        assert rc == 0
        frames = json.load(open(os.path.join(out, "frames.json")))
        assert len(frames["frames"]) == 4


class TestReport:
    def test_corrupted_artifact_fails_verification(self, synth_dir, tmp_path, capsys):
        out = str(tmp_path / "agg")
        assert main(["aggregate", *analysis_args(synth_dir), "--out", out]) == 0
        with open(os.path.join(out, "factors.csv"), "a") as fh:
            fh.write("tampered\n")
        assert main(["report", "--dir", out, "--verify"]) == 2
        assert "hash mismatch" in capsys.readouterr().err

    def test_missing_artifact_fails_verification(self, synth_dir, tmp_path, capsys):
        out = str(tmp_path / "agg2")
        assert main(["aggregate", *analysis_args(synth_dir), "--out", out]) == 0
        os.remove(os.path.join(out, "summary.json"))
        assert main(["report", "--dir", out, "--verify"]) == 2
        assert "missing artifact" in capsys.readouterr().err

    def test_directory_without_manifest_is_a_data_error(self, tmp_path):
        assert main(["report", "--dir", str(tmp_path)]) == 2


class TestUsageAndLoadErrors:
    def test_missing_out_is_a_usage_error(self, synth_dir, monkeypatch):
        monkeypatch.delenv("POLARSCOPE_OUT", raising=False)
        assert main(["aggregate", *analysis_args(synth_dir)]) == 1

    def test_out_env_fallback(self, synth_dir, tmp_path, monkeypatch):
        out = str(tmp_path / "env_out")
        monkeypatch.setenv("POLARSCOPE_OUT", out)
        assert main(["aggregate", *analysis_args(synth_dir)]) == 0
        assert os.path.exists(os.path.join(out, "clusters.json"))

    def test_bad_weights_and_missing_subcommand(self, synth_dir, tmp_path):
        out = str(tmp_path / "x")
        rc = main(
            ["aggregate", *analysis_args(synth_dir), "--weights", "1,2", "--out", out]
        )
        assert rc == 1
        assert main([]) == 1
        assert main(["frobnicate"]) == 1

    def test_bad_timespan_is_a_usage_error(self, synth_dir, tmp_path):
        args = analysis_args(synth_dir)
        args[5] = "not-a-date"  # --start value
        assert main(["aggregate", *args, "--out", str(tmp_path / "x")]) == 1

    def test_malformed_row_strict_vs_lenient(self, synth_dir, tmp_path, capsys):
        log = tmp_path / "mixed.jsonl"
        with open(os.path.join(synth_dir, "log.jsonl")) as fh:
            good = [next(fh) for _ in range(200)]
        log.write_text(
            "".join(good[:100])
            + '{"user_id": "u", "oops": true}\n'
            + "".join(good[100:])
        )
        args = [
            "--log", str(log),
            "--config", os.path.join(synth_dir, "debate_config.json"),
            "--start", SMALL_SPAN[0],
            "--end", SMALL_SPAN[1],
        ]
        assert main(["aggregate", *args, "--out", str(tmp_path / "s")]) == 2
        rc = main(["aggregate", *args, "--lenient", "--out", str(tmp_path / "l")])
        assert rc == 0
        assert "malformed" in capsys.readouterr().err

    def test_empty_log_is_a_data_error(self, synth_dir, tmp_path):
        log = tmp_path / "empty.jsonl"
        log.write_text("")
        args = [
            "--log", str(log),
            "--config", os.path.join(synth_dir, "debate_config.json"),
            "--start", SMALL_SPAN[0],
            "--end", SMALL_SPAN[1],
        ]
        assert main(["aggregate", *args, "--out", str(tmp_path / "x")]) == 2
