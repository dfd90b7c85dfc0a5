"""Sliding-window analysis: watch intermediates merge into the poles.

Builds a small scenario where two intermediate groups abruptly go fully
partisan on day 90, then recovers that story from the log alone: frames,
frame types, periods, the convergence trend, and the cluster flow graph.

Run: python3 demos/03_temporal_periods.py
"""

from datetime import datetime, timedelta, timezone

from polarscope import (
    Archetype,
    ClusterParams,
    CommunitySpec,
    DebateConfig,
    MixMorph,
    PeriodType,
    Scenario,
    SourceProfile,
    active_users,
    analyze_frames,
    classify_analyses,
    convergence_trend,
    generate_scenario,
    make_frames,
    sankey_payload,
    segment_periods,
)

CONFIG = DebateConfig(
    debate_name="demo",
    community_pos=CommunitySpec("camp_pos", tuple(f"pos_{i:02d}" for i in range(12))),
    community_neg=CommunitySpec("camp_neg", tuple(f"neg_{i:02d}" for i in range(12))),
)

SPAN = (
    datetime(2022, 1, 1, tzinfo=timezone.utc),
    datetime(2022, 7, 31, tzinfo=timezone.utc),
)

single = SourceProfile("single")
zipf = SourceProfile("zipf", 1.2)

SCENARIO = Scenario(
    name="abrupt-merge",
    config=CONFIG,
    n_users=240,
    timespan=SPAN,
    archetypes=(
        Archetype("pol_pos", 0.30, (1.0, 0.0), single, zipf, rate_per_day=6.0),
        Archetype("pol_neg", 0.25, (0.0, 1.0), zipf, single, rate_per_day=6.0),
        Archetype("int_pos", 0.25, (0.85, 0.15), zipf, zipf, rate_per_day=6.0),
        Archetype("int_neg", 0.20, (0.15, 0.85), zipf, zipf, rate_per_day=6.0),
    ),
    events=(
        MixMorph(at_day=90, archetype="int_pos", new_mix=(1.0, 0.0)),
        MixMorph(at_day=90, archetype="int_neg", new_mix=(0.0, 1.0)),
    ),
    params=ClusterParams(stiffness=0.5),
)


def main() -> None:
    ds, _ = generate_scenario(SCENARIO, seed=3)
    print(f"generated {len(ds)} interactions for {SCENARIO.n_users} users")

    frames = make_frames(SPAN[0], SPAN[1], timedelta(days=28), timedelta(days=14))
    cohort = active_users(ds, frames, 0.8)
    print(f"{len(frames)} frames; {len(cohort)} users active in >= 80% of them")

    analyses = analyze_frames(ds, frames, cohort, SCENARIO.params, jobs=2)
    types, signatures = classify_analyses(analyses)
    print("\nframe  k  type")
    for analysis, frame_type in zip(analyses, types):
        k = analysis.model.k if analysis.model is not None else "-"
        print(f"{analysis.frame.index:>5} {k:>2}  {frame_type.value}")

    periods = segment_periods(types, signatures)
    print("\nperiods:")
    for period in periods:
        print(
            f"  frames {period.frame_start}..{period.frame_stop - 1}: "
            f"{period.period_type.value} ({period.n_frames} frames)"
        )

    conv = [p for p in periods if p.period_type == PeriodType.CONVERGENCE and p.n_frames >= 2]
    if conv:
        longest = max(conv, key=lambda p: (p.n_frames, p.frame_start))
        trend = convergence_trend(analyses[longest.frame_start : longest.frame_stop])
        print(
            f"\nconvergence trend: pole gap shrinks {abs(trend.slope):.4f}/frame "
            f"(slope {trend.slope:.4f})"
        )

    payload = sankey_payload(analyses)
    merges = [
        link
        for link in payload["links"]
        if len({n["label"] for n in payload["nodes"] if n["id"] in (link["source"], link["target"])}) > 1
    ]
    print(f"\nflow graph: {len(payload['nodes'])} nodes, {len(payload['links'])} links,")
    print(f"{len(merges)} links change behavioral label (the merge bands)")
    print("\n(export these with the CLI and draw them:")
    print("  polarscope temporal ... --out out/ && render sankey out/sankey.json -o flows.svg)")


if __name__ == "__main__":
    main()
