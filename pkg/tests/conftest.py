"""Shared fixtures: each preset's full pipeline runs once per session."""

from __future__ import annotations

import time
from dataclasses import dataclass

import pytest

from polarscope import (
    ClusterModel,
    Dataset,
    GroundTruth,
    Scenario,
    active_users,
    analyze_frames,
    classify_analyses,
    factor_vectors,
    feature_matrix,
    generate_scenario,
    make_frames,
    preset,
    segment_periods,
    select_k,
)


@dataclass
class TemporalRun:
    scenario: Scenario
    ds: Dataset
    truth: GroundTruth
    frames: list
    cohort: set
    analyses: list
    types: list
    signatures: list
    periods: list
    elapsed: float  # wall seconds for generation plus the full analysis


def run_temporal(name: str, seed: int) -> TemporalRun:
    t0 = time.perf_counter()
    scenario = preset(name)
    ds, truth = generate_scenario(scenario, seed)
    frames = make_frames(
        scenario.timespan[0], scenario.timespan[1], scenario.window, scenario.step
    )
    cohort = active_users(ds, frames, scenario.min_active_fraction)
    analyses = analyze_frames(ds, frames, cohort, scenario.params, jobs=4)
    types, signatures = classify_analyses(analyses)
    periods = segment_periods(types, signatures)
    return TemporalRun(
        scenario, ds, truth, list(frames), cohort, list(analyses), types,
        signatures, periods, elapsed=time.perf_counter() - t0,
    )


@dataclass
class AggregateRun:
    scenario: Scenario
    ds: Dataset
    truth: GroundTruth
    vectors: list
    model: ClusterModel
    elapsed: float  # wall seconds for generation, factors and k selection


def run_aggregate(name: str, seed: int) -> AggregateRun:
    t0 = time.perf_counter()
    scenario = preset(name)
    ds, truth = generate_scenario(scenario, seed)
    vectors = factor_vectors(ds)
    ids, X = feature_matrix(vectors, scenario.params.stiffness)
    model = select_k(X, scenario.params, ids=ids)
    return AggregateRun(
        scenario, ds, truth, vectors, model, elapsed=time.perf_counter() - t0
    )


@pytest.fixture(scope="session")
def covid_run() -> TemporalRun:
    return run_temporal("covid-analog", seed=11)


@pytest.fixture(scope="session")
def ukraine_run() -> TemporalRun:
    return run_temporal("ukraine-analog", seed=11)


@pytest.fixture(scope="session")
def static2_run() -> TemporalRun:
    return run_temporal("static-2", seed=3)


@pytest.fixture(scope="session")
def static4_run() -> TemporalRun:
    return run_temporal("static-4", seed=3)


@pytest.fixture(scope="session")
def agg_vaccine() -> AggregateRun:
    return run_aggregate("aggregate-vaccine", seed=5)


@pytest.fixture(scope="session")
def agg_ukraine() -> AggregateRun:
    return run_aggregate("aggregate-ukraine", seed=5)


# one pass/fail line per acceptance criterion, shown after the run summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
