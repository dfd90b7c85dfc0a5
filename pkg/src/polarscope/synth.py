"""Synthetic interaction-log generator with planted, recoverable structure.

Populations are mixtures of archetypes: each archetype fixes a community
attention split, one source-selection profile per community, and a Poisson
activity rate.  A schedule of events can rewrite the population mix
(reassigning users between archetypes) or morph an archetype's community mix
linearly over a relaxation window, which is how converging-then-polarizing
timelines are planted.

Generation is deterministic: user i draws from substream (seed, i), so users
are independent and the merged, time-sorted log is identical for a given
seed no matter how generation is scheduled.  A GroundTruth sidecar records
who followed which archetype in every frame, per-frame activity, and the
period-type sequence the scenario plants.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Optional, Sequence, Union

import numpy as np

from .clustering import ClusterParams
from .errors import DataError, UsageError
from .ingest import CommunitySpec, Dataset, DebateConfig, parse_timespan
from .periods import PeriodType
from .timeline import make_frames

_DAY_SECONDS = 86400.0


# ----- source-selection profiles ------------------------------------------------------


@dataclass(frozen=True)
class SourceProfile:
    """How an archetype spreads attention over one community's roster.

    kinds: 'single' (one user-specific source), 'uniform' (all sources
    equally), 'zipf' (rank-frequency decay with the given exponent).
    """

    kind: str
    exponent: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("single", "uniform", "zipf"):
            raise UsageError(f"unknown source profile {self.kind!r}")
        if self.kind == "zipf" and not self.exponent > 0:
            raise UsageError("zipf exponent must be > 0")

    def probs(self, n: int) -> Optional[np.ndarray]:
        if self.kind == "single":
            return None
        if self.kind == "uniform":
            return np.full(n, 1.0 / n)
        ranks = np.arange(1, n + 1, dtype=float)
        w = ranks ** (-self.exponent)
        return w / w.sum()

    def to_string(self) -> str:
        return self.kind if self.kind != "zipf" else f"zipf:{self.exponent}"

    @staticmethod
    def parse(text: str) -> "SourceProfile":
        if text.startswith("zipf:"):
            try:
                return SourceProfile("zipf", float(text.split(":", 1)[1]))
            except ValueError:
                raise UsageError(f"bad zipf profile {text!r}") from None
        return SourceProfile(text)


@dataclass(frozen=True)
class Archetype:
    name: str
    share: float
    mix: tuple[float, float]  # (p_pos, p_neg), sums to 1
    profile_pos: SourceProfile
    profile_neg: SourceProfile
    rate_per_day: float

    def __post_init__(self) -> None:
        if not self.name:
            raise UsageError("archetype needs a name")
        if self.share < 0:
            raise UsageError(f"{self.name}: share must be nonnegative")
        if abs(self.mix[0] + self.mix[1] - 1.0) > 1e-9 or min(self.mix) < 0:
            raise UsageError(f"{self.name}: mix must be a two-way distribution")
        if not self.rate_per_day > 0:
            raise UsageError(f"{self.name}: rate must be > 0")


# ----- scheduled events ----------------------------------------------------------------


@dataclass(frozen=True)
class MixMorph:
    """Linearly morph one archetype's community mix starting at at_day.

    relax_days 0 is a step change; otherwise the mix interpolates from its
    current value to new_mix over [at_day, at_day + relax_days].
    """

    at_day: float
    archetype: str
    new_mix: tuple[float, float]
    relax_days: float = 0.0

    def __post_init__(self) -> None:
        if self.at_day < 0 or self.relax_days < 0:
            raise UsageError("event days must be nonnegative")
        if abs(self.new_mix[0] + self.new_mix[1] - 1.0) > 1e-9 or min(self.new_mix) < 0:
            raise UsageError("new_mix must be a two-way distribution")


@dataclass(frozen=True)
class Reassign:
    """Rewrite the population mix at at_day: members of each listed archetype
    are split between target archetypes by the given fractions (largest
    remainder, in member order, so the split is exact and deterministic)."""

    at_day: float
    mapping: tuple[tuple[str, tuple[tuple[str, float], ...]], ...]

    def __post_init__(self) -> None:
        if self.at_day < 0:
            raise UsageError("event days must be nonnegative")
        for old, targets in self.mapping:
            total = sum(frac for _, frac in targets)
            if abs(total - 1.0) > 1e-9:
                raise UsageError(f"reassign fractions for {old!r} sum to {total}")


Event = Union[MixMorph, Reassign]


# ----- scenario -------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    """A complete generation recipe plus the analysis defaults it was tuned for."""

    name: str
    config: DebateConfig
    n_users: int
    timespan: tuple[datetime, datetime]
    archetypes: tuple[Archetype, ...]
    events: tuple[Event, ...] = ()
    params: ClusterParams = ClusterParams(stiffness=0.5)
    window: timedelta = timedelta(days=28)
    step: timedelta = timedelta(days=14)
    min_active_fraction: float = 0.8
    planted_period_types: Optional[tuple[PeriodType, ...]] = None

    def __post_init__(self) -> None:
        if self.n_users < 1:
            raise UsageError("n_users must be >= 1")
        total = sum(a.share for a in self.archetypes if a.share > 0)
        initial = [a for a in self.archetypes if a.share > 0]
        if not initial or abs(total - 1.0) > 1e-9:
            raise UsageError(f"initial archetype shares sum to {total}, not 1")
        names = [a.name for a in self.archetypes]
        if len(set(names)) != len(names):
            raise UsageError("duplicate archetype names")
        days = [e.at_day for e in self.events]
        if days != sorted(days):
            raise UsageError("events must be in chronological order")
        span_days = (self.timespan[1] - self.timespan[0]).total_seconds() / _DAY_SECONDS
        if any(d >= span_days for d in days):
            raise UsageError("event beyond the timespan")

    @property
    def span_days(self) -> float:
        return (self.timespan[1] - self.timespan[0]).total_seconds() / _DAY_SECONDS


# ----- ground truth ---------------------------------------------------------------------


@dataclass
class GroundTruth:
    """What the generator planted, recorded independently of the analysis path."""

    scenario_name: str
    seed: int
    n_users: int
    n_frames: int
    archetype_initial: dict[str, str]
    archetype_final: dict[str, str]
    archetype_by_frame: dict[str, tuple[str, ...]]
    active_by_frame: dict[str, tuple[bool, ...]]
    planted_period_types: Optional[tuple[PeriodType, ...]] = None

    @property
    def planted_change_points(self) -> dict[int, PeriodType]:
        """Frame indices where the planted period type changes (frame 0 included)."""
        out: dict[int, PeriodType] = {}
        if not self.planted_period_types:
            return out
        prev: Optional[PeriodType] = None
        for i, t in enumerate(self.planted_period_types):
            if t != prev:
                out[i] = t
                prev = t
        return out

    def retained_cohort(self, min_active_fraction: float) -> set[str]:
        """Users active in at least the given fraction of frames (same 1e-9
        slack as the engine's activity filter, but computed from generation
        bookkeeping rather than from the log)."""
        need = min_active_fraction * self.n_frames - 1e-9
        return {
            uid
            for uid, flags in self.active_by_frame.items()
            if sum(flags) >= need
        }

    def to_dict(self) -> dict:
        return {
            "schema_version": "1",
            "scenario_name": self.scenario_name,
            "seed": self.seed,
            "n_users": self.n_users,
            "n_frames": self.n_frames,
            "archetype_initial": dict(sorted(self.archetype_initial.items())),
            "archetype_final": dict(sorted(self.archetype_final.items())),
            "archetype_by_frame": {
                k: list(v) for k, v in sorted(self.archetype_by_frame.items())
            },
            "active_by_frame": {
                k: [int(b) for b in v] for k, v in sorted(self.active_by_frame.items())
            },
            "planted_period_types": (
                [t.value for t in self.planted_period_types]
                if self.planted_period_types
                else None
            ),
            "planted_change_points": {
                str(k): v.value for k, v in self.planted_change_points.items()
            },
        }


# ----- allocation helpers ---------------------------------------------------------------


def _largest_remainder(n: int, fractions: Sequence[float]) -> list[int]:
    """Split n items by fractions into exact integer counts."""
    quotas = [n * f for f in fractions]
    counts = [int(q) for q in quotas]
    short = n - sum(counts)
    order = sorted(
        range(len(fractions)), key=lambda i: (-(quotas[i] - counts[i]), i)
    )
    for i in order[:short]:
        counts[i] += 1
    return counts


def _mix_breakpoints(
    archetype: Archetype, events: Sequence[Event], span_days: float
) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise-linear p_pos(t) for one archetype under its morph events."""
    xs = [0.0]
    ys = [archetype.mix[0]]
    for ev in events:
        if not isinstance(ev, MixMorph) or ev.archetype != archetype.name:
            continue
        cur = float(np.interp(ev.at_day, xs, ys))
        if ev.at_day > xs[-1]:
            xs.append(ev.at_day)
            ys.append(cur)
        ramp_end = ev.at_day + max(ev.relax_days, 1e-9)  # 0 relax is a step
        xs.append(ramp_end)
        ys.append(ev.new_mix[0])
    xs.append(max(span_days, xs[-1] + 1.0))
    ys.append(ys[-1])
    return np.asarray(xs), np.asarray(ys)


def _user_chains(
    scenario: Scenario,
) -> tuple[list[list[tuple[float, str]]], dict[str, Archetype]]:
    """Per-user archetype chain [(start_day, archetype_name), ...]."""
    by_name = {a.name: a for a in scenario.archetypes}
    initial = [a for a in scenario.archetypes if a.share > 0]
    counts = _largest_remainder(scenario.n_users, [a.share for a in initial])
    chains: list[list[tuple[float, str]]] = []
    membership: dict[str, list[int]] = {a.name: [] for a in scenario.archetypes}
    idx = 0
    for arch, count in zip(initial, counts):
        for _ in range(count):
            chains.append([(0.0, arch.name)])
            membership[arch.name].append(idx)
            idx += 1
    for ev in scenario.events:
        if not isinstance(ev, Reassign):
            continue
        for old, targets in ev.mapping:
            if old not in membership:
                raise UsageError(f"reassign of unknown archetype {old!r}")
            members = membership[old]
            membership[old] = []
            split = _largest_remainder(len(members), [f for _, f in targets])
            pos = 0
            for (new, _), cnt in zip(targets, split):
                if new not in by_name:
                    raise UsageError(f"reassign to unknown archetype {new!r}")
                for u in members[pos : pos + cnt]:
                    chains[u].append((ev.at_day, new))
                    membership[new].append(u)
                pos += cnt
            for name in membership:
                membership[name].sort()
    return chains, by_name


# ----- generation ------------------------------------------------------------------------


def generate_scenario(scenario: Scenario, seed: int) -> tuple[Dataset, GroundTruth]:
    """Generate the interaction log and its ground-truth sidecar."""
    span = scenario.span_days
    frames = make_frames(
        scenario.timespan[0], scenario.timespan[1], scenario.window, scenario.step
    )
    frame_days = [
        (
            (f.start - scenario.timespan[0]).total_seconds() / _DAY_SECONDS,
            (f.end - scenario.timespan[0]).total_seconds() / _DAY_SECONDS,
        )
        for f in frames
    ]
    chains, by_name = _user_chains(scenario)
    breaks = {
        name: _mix_breakpoints(arch, scenario.events, span)
        for name, arch in by_name.items()
    }
    n_pos = len(scenario.config.community_pos.source_ids)
    n_neg = len(scenario.config.community_neg.source_ids)
    start_epoch = int(scenario.timespan[0].timestamp())
    width = max(5, len(str(scenario.n_users)))
    uids = [f"u{i:0{width}d}" for i in range(scenario.n_users)]

    all_ts: list[np.ndarray] = []
    all_users: list[np.ndarray] = []
    all_sources: list[np.ndarray] = []
    archetype_by_frame: dict[str, tuple[str, ...]] = {}
    active_by_frame: dict[str, tuple[bool, ...]] = {}

    for i, uid in enumerate(uids):
        chain = chains[i]
        rate = by_name[chain[-1][1]].rate_per_day  # activity level rides the final role
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        n_events = int(rng.poisson(rate * span))
        times = np.sort(rng.uniform(0.0, span, n_events))

        # Segment the user's timeline by archetype, then draw community and
        # source per event from that segment's mix and profiles.
        seg_bounds = [d for d, _ in chain] + [span + 1.0]
        p = np.empty(n_events)
        for s in range(len(chain)):
            mask = (times >= seg_bounds[s]) & (times < seg_bounds[s + 1])
            if not mask.any():
                continue
            xs, ys = breaks[chain[s][1]]
            p[mask] = np.interp(times[mask], xs, ys)
        is_pos = rng.random(n_events) < p

        source_codes = np.empty(n_events, dtype=np.int64)
        for s in range(len(chain)):
            seg_mask = (times >= seg_bounds[s]) & (times < seg_bounds[s + 1])
            arch = by_name[chain[s][1]]
            for positive, profile, n_side, offset in (
                (True, arch.profile_pos, n_pos, 0),
                (False, arch.profile_neg, n_neg, n_pos),
            ):
                mask = seg_mask & (is_pos == positive)
                m = int(mask.sum())
                if m == 0:
                    continue
                probs = profile.probs(n_side)
                if probs is None:
                    source_codes[mask] = offset + (i % n_side)
                else:
                    source_codes[mask] = offset + rng.choice(n_side, size=m, p=probs)

        all_ts.append(start_epoch + np.floor(times * _DAY_SECONDS).astype(np.int64))
        all_users.append(np.full(n_events, i, dtype=np.int32))
        all_sources.append(source_codes.astype(np.int32))

        # Ground-truth bookkeeping: archetype at each frame midpoint, and
        # actual activity derived from the emitted event times.
        names = []
        active = []
        for fs, fe in frame_days:
            mid = (fs + fe) / 2.0
            current = chain[0][1]
            for day, name in chain:
                if day <= mid:
                    current = name
            names.append(current)
            lo, hi = np.searchsorted(times, [fs, fe])
            active.append(bool(hi > lo))
        archetype_by_frame[uid] = tuple(names)
        active_by_frame[uid] = tuple(active)

    ds = Dataset(
        scenario.config,
        np.concatenate(all_ts) if all_ts else np.empty(0, dtype=np.int64),
        np.concatenate(all_users) if all_users else np.empty(0, dtype=np.int32),
        np.concatenate(all_sources) if all_sources else np.empty(0, dtype=np.int32),
        tuple(uids),
    )
    truth = GroundTruth(
        scenario_name=scenario.name,
        seed=seed,
        n_users=scenario.n_users,
        n_frames=len(frames),
        archetype_initial={uid: chains[i][0][1] for i, uid in enumerate(uids)},
        archetype_final={uid: chains[i][-1][1] for i, uid in enumerate(uids)},
        archetype_by_frame=archetype_by_frame,
        active_by_frame=active_by_frame,
        planted_period_types=scenario.planted_period_types,
    )
    return ds, truth


def generate(
    config: DebateConfig,
    archetypes: Sequence[Archetype],
    schedule: Sequence[Event],
    timespan: tuple[datetime, datetime],
    n_users: int,
    seed: int,
    **kwargs,
) -> tuple[Dataset, GroundTruth]:
    """One-shot generation without building a named Scenario first."""
    scenario = Scenario(
        name="inline",
        config=config,
        n_users=n_users,
        timespan=timespan,
        archetypes=tuple(archetypes),
        events=tuple(schedule),
        **kwargs,
    )
    return generate_scenario(scenario, seed)


# ----- scenario (de)serialization ---------------------------------------------------------


def scenario_to_dict(s: Scenario) -> dict:
    events = []
    for ev in s.events:
        if isinstance(ev, MixMorph):
            events.append(
                {
                    "kind": "mix_morph",
                    "at_day": ev.at_day,
                    "archetype": ev.archetype,
                    "new_mix": list(ev.new_mix),
                    "relax_days": ev.relax_days,
                }
            )
        else:
            events.append(
                {
                    "kind": "reassign",
                    "at_day": ev.at_day,
                    "mapping": {
                        old: [[name, frac] for name, frac in targets]
                        for old, targets in ev.mapping
                    },
                }
            )
    return {
        "schema_version": "1",
        "name": s.name,
        "debate_config": s.config.to_dict(),
        "n_users": s.n_users,
        "timespan": [
            s.timespan[0].strftime("%Y-%m-%dT%H:%M:%SZ"),
            s.timespan[1].strftime("%Y-%m-%dT%H:%M:%SZ"),
        ],
        "archetypes": [
            {
                "name": a.name,
                "share": a.share,
                "mix": list(a.mix),
                "profile_pos": a.profile_pos.to_string(),
                "profile_neg": a.profile_neg.to_string(),
                "rate_per_day": a.rate_per_day,
            }
            for a in s.archetypes
        ],
        "events": events,
        "stiffness": s.params.stiffness,
        "weights": list(s.params.weights),
        "window_days": s.window.total_seconds() / _DAY_SECONDS,
        "step_days": s.step.total_seconds() / _DAY_SECONDS,
        "min_active_fraction": s.min_active_fraction,
        "planted_period_types": (
            [t.value for t in s.planted_period_types] if s.planted_period_types else None
        ),
    }


def scenario_from_dict(data: dict) -> Scenario:
    try:
        events: list[Event] = []
        for ev in data.get("events", ()):
            if ev["kind"] == "mix_morph":
                events.append(
                    MixMorph(
                        at_day=float(ev["at_day"]),
                        archetype=ev["archetype"],
                        new_mix=tuple(ev["new_mix"]),
                        relax_days=float(ev.get("relax_days", 0.0)),
                    )
                )
            elif ev["kind"] == "reassign":
                events.append(
                    Reassign(
                        at_day=float(ev["at_day"]),
                        mapping=tuple(
                            (old, tuple((n, float(f)) for n, f in targets))
                            for old, targets in ev["mapping"].items()
                        ),
                    )
                )
            else:
                raise DataError(f"unknown event kind {ev.get('kind')!r}")
        planted = data.get("planted_period_types")
        return Scenario(
            name=data.get("name", "scenario"),
            config=DebateConfig.from_dict(data["debate_config"]),
            n_users=int(data["n_users"]),
            timespan=parse_timespan(*data["timespan"]),
            archetypes=tuple(
                Archetype(
                    name=a["name"],
                    share=float(a["share"]),
                    mix=tuple(a["mix"]),
                    profile_pos=SourceProfile.parse(a["profile_pos"]),
                    profile_neg=SourceProfile.parse(a["profile_neg"]),
                    rate_per_day=float(a["rate_per_day"]),
                )
                for a in data["archetypes"]
            ),
            events=tuple(events),
            params=ClusterParams(
                stiffness=float(data.get("stiffness", 0.5)),
                weights=tuple(data.get("weights", (0.6, 0.2, 0.2))),
            ),
            window=timedelta(days=float(data.get("window_days", 28))),
            step=timedelta(days=float(data.get("step_days", 14))),
            min_active_fraction=float(data.get("min_active_fraction", 0.8)),
            planted_period_types=(
                tuple(PeriodType(t) for t in planted) if planted else None
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"bad scenario: {exc}") from None


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return scenario_from_dict(json.load(fh))
    except OSError as exc:
        raise DataError(f"cannot read scenario {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"scenario {path} is not valid JSON: {exc}") from None


# ----- presets ---------------------------------------------------------------------------


def _vaccine_config() -> DebateConfig:
    return DebateConfig(
        debate_name="vaccine",
        community_pos=CommunitySpec(
            "pro_vaccine", tuple(f"provax_{i:02d}" for i in range(1, 11))
        ),
        community_neg=CommunitySpec(
            "anti_vaccine", tuple(f"antivax_{i:02d}" for i in range(1, 11))
        ),
    )


def _ukraine_config() -> DebateConfig:
    return DebateConfig(
        debate_name="ukraine",
        community_pos=CommunitySpec(
            "pro_ukraine", tuple(f"proukr_{i:02d}" for i in range(1, 11))
        ),
        community_neg=CommunitySpec(
            "pro_russia", tuple(f"prorus_{i:02d}" for i in range(1, 11))
        ),
    )


_SPAN_2022 = (
    datetime(2022, 1, 1, tzinfo=timezone.utc),
    datetime(2022, 7, 31, tzinfo=timezone.utc),
)

_ZIPF = SourceProfile("zipf", 1.0)
_UNIFORM = SourceProfile("uniform")
_SINGLE = SourceProfile("single")


def _aggregate_scenario(
    name: str, config: DebateConfig, shares: tuple[float, float, float, float], stiffness: float
) -> Scenario:
    pp, ip, in_, pn = shares
    return Scenario(
        name=name,
        config=config,
        n_users=1000,
        timespan=_SPAN_2022,
        archetypes=(
            Archetype("polarized_pos", pp, (1.0, 0.0), _ZIPF, _SINGLE, 3.0),
            Archetype("intermediate_pos", ip, (0.84, 0.16), _UNIFORM, _SINGLE, 3.0),
            Archetype("intermediate_neg", in_, (0.16, 0.84), _SINGLE, _UNIFORM, 3.0),
            Archetype("polarized_neg", pn, (0.0, 1.0), _SINGLE, _ZIPF, 3.0),
        ),
        params=ClusterParams(stiffness=stiffness),
    )


def _covid_analog() -> Scenario:
    cc = PeriodType.CONVERGENCE
    pp = PeriodType.POLARIZED
    return Scenario(
        name="covid-analog",
        config=_vaccine_config(),
        n_users=800,
        timespan=_SPAN_2022,
        archetypes=(
            Archetype("polarized_pos", 0.53, (1.0, 0.0), _ZIPF, _SINGLE, 4.0),
            Archetype("intermediate_pos", 0.13, (0.85, 0.15), _ZIPF, _SINGLE, 4.0),
            Archetype("intermediate_neg", 0.02, (0.15, 0.85), _SINGLE, _ZIPF, 4.0),
            Archetype("polarized_neg", 0.32, (0.0, 1.0), _SINGLE, _ZIPF, 4.0),
        ),
        events=(
            # Frame starts land every 14 days; switching exactly at day 42
            # leaves frame 2 as the only blended window.
            MixMorph(42.0, "intermediate_pos", (1.0, 0.0)),
            MixMorph(42.0, "intermediate_neg", (0.0, 1.0)),
        ),
        params=ClusterParams(stiffness=0.5),
        planted_period_types=(cc,) * 3 + (pp,) * 12,
    )


def _ukraine_analog() -> Scenario:
    u, b, c, p = (
        PeriodType.UNSTRUCTURED,
        PeriodType.BALANCED,
        PeriodType.CONVERGENCE,
        PeriodType.POLARIZED,
    )
    chaos_mixes = (0.30, 0.38, 0.44, 0.50, 0.50, 0.56, 0.62, 0.70)
    chaos_profiles = (
        (_UNIFORM, _UNIFORM),
        (_SINGLE, _UNIFORM),
        (_UNIFORM, _SINGLE),
        (_ZIPF, _ZIPF),
        (_SINGLE, _SINGLE),
        (SourceProfile("zipf", 1.5), _UNIFORM),
        (_UNIFORM, SourceProfile("zipf", 1.5)),
        (_ZIPF, _SINGLE),
    )
    chaos = tuple(
        Archetype(f"chaos_{i}", 0.125, (m, 1.0 - m), pp_, pn_, 4.0)
        for i, (m, (pp_, pn_)) in enumerate(zip(chaos_mixes, chaos_profiles))
    )
    roles = (
        Archetype("polarized_pos", 0.0, (1.0, 0.0), _ZIPF, _SINGLE, 4.0),
        Archetype("polarized_neg", 0.0, (0.0, 1.0), _SINGLE, _ZIPF, 4.0),
        Archetype("balanced_pos", 0.0, (0.5, 0.5), _ZIPF, _ZIPF, 4.0),
        Archetype("balanced_neg", 0.0, (0.5, 0.5), _ZIPF, _ZIPF, 4.0),
        Archetype("intermediate_pos", 0.0, (0.85, 0.15), _ZIPF, _SINGLE, 4.0),
        Archetype("intermediate_neg", 0.0, (0.15, 0.85), _SINGLE, _ZIPF, 4.0),
        # Casuals exist to be dropped by the activity filter: ~2 events over
        # the whole span keeps the chance of clearing 12-of-15 frames ~1e-5.
        Archetype("casual_pos", 0.0, (1.0, 0.0), _ZIPF, _SINGLE, 0.01),
        Archetype("casual_neg", 0.0, (0.0, 1.0), _SINGLE, _ZIPF, 0.01),
    )
    # Day 54: the debate snaps from a scattered mix into two poles plus a
    # balanced middle.  Each 100-user chaos group splits identically, so the
    # role shares are exact.
    role_split = (
        ("polarized_pos", 0.40),
        ("polarized_neg", 0.38),
        ("balanced_pos", 0.14),
        ("balanced_neg", 0.04),
        ("casual_pos", 0.02),
        ("casual_neg", 0.02),
    )
    events: tuple[Event, ...] = (
        Reassign(54.0, tuple((f"chaos_{i}", role_split) for i in range(8))),
        # Day 84 (a frame start): the balanced middle splits into two leaning
        # groups that creep toward the poles over ~3 months, then snap.
        Reassign(
            84.0,
            (
                ("balanced_pos", (("intermediate_pos", 1.0),)),
                ("balanced_neg", (("intermediate_neg", 1.0),)),
            ),
        ),
        MixMorph(84.0, "intermediate_pos", (0.87, 0.13), relax_days=98.0),
        MixMorph(84.0, "intermediate_neg", (0.13, 0.87), relax_days=98.0),
        MixMorph(182.0, "intermediate_pos", (1.0, 0.0)),
        MixMorph(182.0, "intermediate_neg", (0.0, 1.0)),
    )
    return Scenario(
        name="ukraine-analog",
        config=_ukraine_config(),
        n_users=800,
        timespan=_SPAN_2022,
        archetypes=chaos + roles,
        events=events,
        params=ClusterParams(stiffness=0.33),
        planted_period_types=(u, u, u, u, b, b) + (c,) * 7 + (p, p),
    )


def _static_scenario(name: str, k: int) -> Scenario:
    if k == 2:
        archetypes = (
            Archetype("polarized_pos", 0.5, (1.0, 0.0), _ZIPF, _SINGLE, 3.0),
            Archetype("polarized_neg", 0.5, (0.0, 1.0), _SINGLE, _ZIPF, 3.0),
        )
        planted = PeriodType.POLARIZED
    else:
        archetypes = (
            Archetype("polarized_pos", 0.35, (1.0, 0.0), _ZIPF, _SINGLE, 3.0),
            Archetype("intermediate_pos", 0.15, (0.85, 0.15), _UNIFORM, _SINGLE, 3.0),
            Archetype("intermediate_neg", 0.15, (0.15, 0.85), _SINGLE, _UNIFORM, 3.0),
            Archetype("polarized_neg", 0.35, (0.0, 1.0), _SINGLE, _ZIPF, 3.0),
        )
        planted = PeriodType.CONVERGENCE
    return Scenario(
        name=name,
        config=_vaccine_config(),
        n_users=400,
        timespan=_SPAN_2022,
        archetypes=archetypes,
        params=ClusterParams(stiffness=0.5),
        planted_period_types=(planted,) * 15,
    )


_PRESETS = {
    "aggregate-vaccine": lambda: _aggregate_scenario(
        "aggregate-vaccine", _vaccine_config(), (0.36, 0.14, 0.05, 0.45), 0.5
    ),
    "aggregate-ukraine": lambda: _aggregate_scenario(
        "aggregate-ukraine", _ukraine_config(), (0.34, 0.16, 0.05, 0.45), 0.33
    ),
    "covid-analog": _covid_analog,
    "ukraine-analog": _ukraine_analog,
    "static-2": lambda: _static_scenario("static-2", 2),
    "static-4": lambda: _static_scenario("static-4", 4),
}


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


def preset(name: str) -> Scenario:
    try:
        builder = _PRESETS[name]
    except KeyError:
        raise UsageError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None
    return builder()
