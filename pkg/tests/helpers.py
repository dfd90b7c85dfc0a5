"""Small builders shared across test modules."""

from __future__ import annotations

from datetime import datetime, timezone

from polarscope import (
    CommunitySpec,
    Dataset,
    DebateConfig,
    InteractionRecord,
)

POS_SOURCES = tuple(f"pos_src_{i}" for i in range(10))
NEG_SOURCES = tuple(f"neg_src_{i}" for i in range(10))


def toy_config(n_pos: int = 10, n_neg: int = 10) -> DebateConfig:
    return DebateConfig(
        debate_name="toy",
        community_pos=CommunitySpec("camp_pos", POS_SOURCES[:n_pos]),
        community_neg=CommunitySpec("camp_neg", NEG_SOURCES[:n_neg]),
    )


def at(day: float, hour: int = 0) -> datetime:
    base = datetime(2022, 1, 1, tzinfo=timezone.utc)
    return datetime.fromtimestamp(
        base.timestamp() + day * 86400 + hour * 3600, tz=timezone.utc
    )


def rec(user: str, source: str, day: float = 0.0) -> InteractionRecord:
    community = "camp_pos" if source.startswith("pos") else "camp_neg"
    return InteractionRecord(user, source, community, at(day))


def toy_dataset(rows: list, config: DebateConfig = None) -> Dataset:
    """rows: (user, source, day) tuples or prebuilt records, freely mixed."""
    cfg = config or toy_config()
    records = [r if isinstance(r, InteractionRecord) else rec(*r) for r in rows]
    return Dataset.from_records(cfg, records)
