"""Shared fixtures: real artifacts generated through the engine's CLI.

The renderer reads only exported files, so fixtures go through the
`polarscope` console script exactly as a user would; nothing imports the
engine. Generation is session-scoped and lazy: only the tests that need
real artifacts pay for it.
"""

from __future__ import annotations

import shutil
import subprocess
from dataclasses import dataclass

import pytest

SEED = 11
SPAN = ("--start", "2022-01-01", "--end", "2022-07-31")


def _run(args: list[str], cwd: str) -> None:
    proc = subprocess.run(args, cwd=cwd, capture_output=True, text=True)
    if proc.returncode != 0:
        pytest.fail(
            f"fixture command {' '.join(args)} exited {proc.returncode}:\n{proc.stderr}"
        )


def _generate(root, preset: str, temporal: bool) -> "GoldenRun":
    if shutil.which("polarscope") is None:
        pytest.fail("the 'polarscope' console script must be installed for fixtures")
    root.mkdir(parents=True, exist_ok=True)
    _run(
        ["polarscope", "synth", "--preset", preset, "--seed", str(SEED), "--out", "synth"],
        cwd=str(root),
    )
    common = [
        "--log", "synth/log.jsonl",
        "--config", "synth/debate_config.json",
        *SPAN,
        "--stiffness", "0.5",
    ]
    _run(["polarscope", "aggregate", *common, "--out", "agg"], cwd=str(root))
    if temporal:
        _run(
            ["polarscope", "temporal", *common, "--jobs", "4", "--out", "temp"],
            cwd=str(root),
        )
    return GoldenRun(
        clusters=str(root / "agg" / "clusters.json"),
        frames=str(root / "temp" / "frames.csv") if temporal else "",
        sankey=str(root / "temp" / "sankey.json") if temporal else "",
    )


@dataclass(frozen=True)
class GoldenRun:
    clusters: str
    frames: str
    sankey: str


@pytest.fixture(scope="session")
def golden(tmp_path_factory) -> GoldenRun:
    """Fixed-seed covid-analog run: the three artifacts the renderer consumes."""
    return _generate(tmp_path_factory.mktemp("covid"), "covid-analog", temporal=True)


@pytest.fixture(scope="session")
def vaccine_clusters(tmp_path_factory) -> str:
    """Aggregate-only vaccine run, for the legend-share check."""
    run = _generate(tmp_path_factory.mktemp("vaccine"), "aggregate-vaccine", temporal=False)
    return run.clusters
