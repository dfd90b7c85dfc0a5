"""Loading, validation and windowing of community-tagged interaction logs.

A debate is a pair of opposing communities, each with a fixed roster of elite
source accounts.  The unit record is one interaction (a repost) of one user
with one source.  Logs are read from JSONL or CSV, validated against the
debate config, and held in a columnar ``Dataset`` that downstream stages
slice by time range.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import DataError

SCHEMA_VERSION = "1"

# Canonical field order for serialized interaction records.
_RECORD_FIELDS = ("user_id", "source_id", "community_id", "timestamp", "kind")


class InteractionKind(str, Enum):
    # Only reposts carry endorsement semantics; other platform verbs are
    # deliberately rejected at ingest rather than silently folded in.
    RETWEET = "retweet"


def parse_timestamp(text: str) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime.

    Accepts 'Z' or explicit offsets; fractional seconds are truncated since
    the engine works at second precision.
    """
    if not isinstance(text, str) or not text:
        raise DataError(f"bad timestamp: {text!r}")
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise DataError(f"bad timestamp {text!r}: {exc}") from None
    if ts.tzinfo is None:
        raise DataError(f"timestamp {text!r} has no UTC offset")
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_timespan(start: str, end: str) -> tuple[datetime, datetime]:
    """Parse a [start, end) pair given as RFC 3339 instants or plain dates."""
    out = []
    for text in (start, end):
        if len(text) == 10:  # YYYY-MM-DD
            text = text + "T00:00:00Z"
        out.append(parse_timestamp(text))
    if not out[0] < out[1]:
        raise DataError(f"empty timespan: {start} .. {end}")
    return out[0], out[1]


@dataclass(frozen=True)
class CommunitySpec:
    """One side of the debate: a community id plus its elite-source roster."""

    community_id: str
    source_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.community_id:
            raise DataError("community_id must be non-empty")
        if len(self.source_ids) < 1:
            raise DataError(f"community {self.community_id!r} has an empty roster")
        if len(set(self.source_ids)) != len(self.source_ids):
            raise DataError(f"community {self.community_id!r} roster has duplicates")


@dataclass(frozen=True)
class DebateConfig:
    """Two opposing communities; the pos/neg orientation is explicit, never inferred."""

    debate_name: str
    community_pos: CommunitySpec
    community_neg: CommunitySpec

    def __post_init__(self) -> None:
        if self.community_pos.community_id == self.community_neg.community_id:
            raise DataError("communities must have distinct ids")
        overlap = set(self.community_pos.source_ids) & set(self.community_neg.source_ids)
        if overlap:
            raise DataError(f"source rosters overlap: {sorted(overlap)}")

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "debate_name": self.debate_name,
            "community_pos": {
                "community_id": self.community_pos.community_id,
                "source_ids": list(self.community_pos.source_ids),
            },
            "community_neg": {
                "community_id": self.community_neg.community_id,
                "source_ids": list(self.community_neg.source_ids),
            },
        }

    @staticmethod
    def from_dict(data: dict) -> "DebateConfig":
        try:
            return DebateConfig(
                debate_name=data["debate_name"],
                community_pos=CommunitySpec(
                    data["community_pos"]["community_id"],
                    tuple(data["community_pos"]["source_ids"]),
                ),
                community_neg=CommunitySpec(
                    data["community_neg"]["community_id"],
                    tuple(data["community_neg"]["source_ids"]),
                ),
            )
        except (KeyError, TypeError) as exc:
            raise DataError(f"bad debate config: {exc}") from None


def load_config(path: str) -> DebateConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path} is not valid JSON: {exc}") from None
    return DebateConfig.from_dict(data)


def save_config(config: DebateConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class InteractionRecord:
    user_id: str
    source_id: str
    community_id: str
    timestamp: datetime  # aware UTC, second precision
    kind: InteractionKind = InteractionKind.RETWEET

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "source_id": self.source_id,
            "community_id": self.community_id,
            "timestamp": format_timestamp(self.timestamp),
            "kind": self.kind.value,
        }


@dataclass
class LoadReport:
    """Accounting of what a load kept and why the rest was dropped."""

    path: str = ""
    total_rows: int = 0
    kept: int = 0
    dropped_out_of_timespan: int = 0
    dropped_malformed: int = 0
    dropped_unknown_source: int = 0
    dropped_community_mismatch: int = 0

    @property
    def dropped_total(self) -> int:
        return (
            self.dropped_out_of_timespan
            + self.dropped_malformed
            + self.dropped_unknown_source
            + self.dropped_community_mismatch
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "path": self.path,
            "total_rows": self.total_rows,
            "kept": self.kept,
            "dropped": {
                "out_of_timespan": self.dropped_out_of_timespan,
                "malformed": self.dropped_malformed,
                "unknown_source": self.dropped_unknown_source,
                "community_mismatch": self.dropped_community_mismatch,
            },
        }

    def write(self, stream=None) -> None:
        stream = stream if stream is not None else sys.stderr
        json.dump(self.to_dict(), stream, sort_keys=True)
        stream.write("\n")


class Dataset:
    """Immutable, time-sorted view of one debate's interaction log.

    Records are stored columnar (epoch seconds plus integer codes) so that
    factor computation over hundreds of thousands of rows stays vectorized.
    Source codes index the concatenated roster: positions < n_pos belong to
    the positive community.
    """

    def __init__(
        self,
        config: DebateConfig,
        ts: np.ndarray,
        user_codes: np.ndarray,
        source_codes: np.ndarray,
        user_pool: tuple[str, ...],
        load_report: Optional[LoadReport] = None,
        _presorted: bool = False,
    ) -> None:
        self.config = config
        self.roster: tuple[str, ...] = (
            config.community_pos.source_ids + config.community_neg.source_ids
        )
        self.n_pos_sources = len(config.community_pos.source_ids)
        self.user_pool = user_pool
        self.load_report = load_report
        ts = np.asarray(ts, dtype=np.int64)
        user_codes = np.asarray(user_codes, dtype=np.int32)
        source_codes = np.asarray(source_codes, dtype=np.int32)
        if not (len(ts) == len(user_codes) == len(source_codes)):
            raise DataError("column length mismatch")
        if not _presorted and len(ts):
            # Sort by (timestamp, user_id, source_id); user codes are assigned
            # in lexicographic order so they sort like the strings do.
            source_rank = np.argsort(np.argsort(np.asarray(self.roster)))
            order = np.lexsort((source_rank[source_codes], user_codes, ts))
            ts, user_codes, source_codes = ts[order], user_codes[order], source_codes[order]
        self.ts = ts
        self.user_codes = user_codes
        self.source_codes = source_codes
        self._user_index: Optional[dict[str, np.ndarray]] = None

    # ----- construction helpers -------------------------------------------------

    @staticmethod
    def from_records(
        config: DebateConfig, records: Iterable[InteractionRecord]
    ) -> "Dataset":
        users, sources, stamps = [], [], []
        source_code = _source_code_map(config)
        for rec in records:
            code = source_code.get(rec.source_id)
            if code is None:
                raise DataError(f"unknown source {rec.source_id!r}")
            if _community_of_code(config, code) != rec.community_id:
                raise DataError(
                    f"source {rec.source_id!r} does not belong to community {rec.community_id!r}"
                )
            users.append(rec.user_id)
            sources.append(code)
            stamps.append(int(rec.timestamp.timestamp()))
        return Dataset._from_columns(config, stamps, users, sources, None)

    @staticmethod
    def _from_columns(
        config: DebateConfig,
        stamps: Sequence[int],
        users: Sequence[str],
        source_codes: Sequence[int],
        report: Optional[LoadReport],
    ) -> "Dataset":
        pool = tuple(sorted(set(users)))
        code_of = {u: i for i, u in enumerate(pool)}
        ucodes = np.fromiter((code_of[u] for u in users), dtype=np.int32, count=len(users))
        return Dataset(
            config,
            np.asarray(stamps, dtype=np.int64),
            ucodes,
            np.asarray(source_codes, dtype=np.int32),
            pool,
            load_report=report,
        )

    # ----- basic views ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.ts)

    @property
    def users(self) -> tuple[str, ...]:
        return self.user_pool

    @property
    def user_index(self) -> dict[str, np.ndarray]:
        """Map user_id -> positions of that user's records."""
        if self._user_index is None:
            order = np.argsort(self.user_codes, kind="stable")
            codes_sorted = self.user_codes[order]
            bounds = np.searchsorted(codes_sorted, np.arange(len(self.user_pool) + 1))
            self._user_index = {
                uid: order[bounds[i] : bounds[i + 1]]
                for i, uid in enumerate(self.user_pool)
            }
        return self._user_index

    def community_is_pos(self) -> np.ndarray:
        return self.source_codes < self.n_pos_sources

    def iter_records(self) -> Iterator[InteractionRecord]:
        pos_id = self.config.community_pos.community_id
        neg_id = self.config.community_neg.community_id
        for i in range(len(self.ts)):
            code = int(self.source_codes[i])
            yield InteractionRecord(
                user_id=self.user_pool[self.user_codes[i]],
                source_id=self.roster[code],
                community_id=pos_id if code < self.n_pos_sources else neg_id,
                timestamp=datetime.fromtimestamp(int(self.ts[i]), tz=timezone.utc),
            )

    def time_bounds(self) -> tuple[datetime, datetime]:
        if not len(self.ts):
            raise DataError("empty dataset has no time bounds")
        return (
            datetime.fromtimestamp(int(self.ts[0]), tz=timezone.utc),
            datetime.fromtimestamp(int(self.ts[-1]), tz=timezone.utc),
        )


def _source_code_map(config: DebateConfig) -> dict[str, int]:
    roster = config.community_pos.source_ids + config.community_neg.source_ids
    return {s: i for i, s in enumerate(roster)}


def _community_of_code(config: DebateConfig, code: int) -> str:
    if code < len(config.community_pos.source_ids):
        return config.community_pos.community_id
    return config.community_neg.community_id


# ----- loading ---------------------------------------------------------------------


def load_dataset(
    path: str,
    config: DebateConfig,
    timespan: tuple[datetime, datetime],
    mode: str = "strict",
    fmt: Optional[str] = None,
) -> Dataset:
    """Load a JSONL or CSV interaction log.

    Records outside the timespan are dropped and counted in both modes.
    Structurally bad rows (malformed fields, unknown sources, roster/community
    mismatches) abort in strict mode and are skipped-and-counted in lenient
    mode.  The resulting report is attached as ``dataset.load_report``.
    """
    if mode not in ("strict", "lenient"):
        raise DataError(f"unknown load mode {mode!r}")
    if fmt is None:
        fmt = "csv" if path.endswith(".csv") else "jsonl"
    if fmt not in ("jsonl", "csv"):
        raise DataError(f"unknown log format {fmt!r}")

    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read log {path}: {exc}") from None

    report = LoadReport(path=path)
    start_s = int(timespan[0].timestamp())
    end_s = int(timespan[1].timestamp())
    source_code = _source_code_map(config)
    community_of = {
        code: _community_of_code(config, code) for code in range(len(source_code))
    }
    stamps: list[int] = []
    users: list[str] = []
    codes: list[int] = []
    strict = mode == "strict"

    def bad(line_no: int, counter: str, msg: str) -> None:
        if strict and counter != "out_of_timespan":
            raise DataError(f"{path}:{line_no}: {msg}")
        if counter == "malformed":
            report.dropped_malformed += 1
        elif counter == "unknown_source":
            report.dropped_unknown_source += 1
        elif counter == "community_mismatch":
            report.dropped_community_mismatch += 1
        else:
            report.dropped_out_of_timespan += 1

    with fh:
        rows: Iterable[tuple[int, dict]]
        if fmt == "jsonl":
            rows = _iter_jsonl(fh, report, bad)
        else:
            rows = _iter_csv(fh, path, report, bad)
        for line_no, row in rows:
            uid = row.get("user_id")
            sid = row.get("source_id")
            cid = row.get("community_id")
            kind = row.get("kind")
            if not uid or not sid or not cid or not isinstance(uid, str) \
                    or not isinstance(sid, str) or not isinstance(cid, str):
                bad(line_no, "malformed", "missing or non-string id fields")
                continue
            if kind != InteractionKind.RETWEET.value:
                bad(line_no, "malformed", f"unsupported interaction kind {kind!r}")
                continue
            try:
                ts = parse_timestamp(row.get("timestamp", ""))
            except DataError as exc:
                bad(line_no, "malformed", str(exc))
                continue
            code = source_code.get(sid)
            if code is None:
                bad(line_no, "unknown_source", f"unknown source {sid!r}")
                continue
            if community_of[code] != cid:
                bad(
                    line_no,
                    "community_mismatch",
                    f"source {sid!r} is not in community {cid!r}",
                )
                continue
            epoch = int(ts.timestamp())
            if not (start_s <= epoch < end_s):
                bad(line_no, "out_of_timespan", "")
                continue
            stamps.append(epoch)
            users.append(sys.intern(uid))
            codes.append(code)
            report.kept += 1

    return Dataset._from_columns(config, stamps, users, codes, report)


def _iter_jsonl(fh, report: LoadReport, bad) -> Iterator[tuple[int, dict]]:
    for line_no, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        report.total_rows += 1
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            bad(line_no, "malformed", f"bad JSON: {exc}")
            continue
        if not isinstance(row, dict):
            bad(line_no, "malformed", "record is not an object")
            continue
        yield line_no, row


def _iter_csv(fh, path: str, report: LoadReport, bad) -> Iterator[tuple[int, dict]]:
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or not set(_RECORD_FIELDS) <= set(reader.fieldnames):
        raise DataError(
            f"{path}: CSV header must include {', '.join(_RECORD_FIELDS)}"
        )
    for row in reader:
        report.total_rows += 1
        yield reader.line_num, row


# ----- serialization ----------------------------------------------------------------


def save_dataset(ds: Dataset, path: str, fmt: Optional[str] = None) -> None:
    """Write the canonical byte-stable form: time-sorted rows, fixed field order."""
    if fmt is None:
        fmt = "csv" if path.endswith(".csv") else "jsonl"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if fmt == "jsonl":
            for rec in ds.iter_records():
                fh.write(json.dumps(rec.to_dict(), separators=(", ", ": ")))
                fh.write("\n")
        elif fmt == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_RECORD_FIELDS)
            for rec in ds.iter_records():
                d = rec.to_dict()
                writer.writerow([d[k] for k in _RECORD_FIELDS])
        else:
            raise DataError(f"unknown log format {fmt!r}")


# ----- windowing --------------------------------------------------------------------


def filter_by_range(ds: Dataset, start: datetime, end: datetime) -> Dataset:
    """Restrict to records with start <= timestamp < end (user index rebuilt)."""
    lo = np.searchsorted(ds.ts, int(start.timestamp()), side="left")
    hi = np.searchsorted(ds.ts, int(end.timestamp()), side="left")
    return Dataset(
        ds.config,
        ds.ts[lo:hi],
        ds.user_codes[lo:hi],
        ds.source_codes[lo:hi],
        ds.user_pool,
        load_report=None,
        _presorted=True,
    )


def active_users(ds: Dataset, frames: Sequence, min_active_fraction: float) -> set[str]:
    """Users active (>= 1 interaction) in at least ``min_active_fraction`` of frames.

    The comparison carries a 1e-9 slack so thresholds like 0.8 over 15 frames
    keep a user active in exactly 12 of them.
    """
    if not 0.0 <= min_active_fraction <= 1.0:
        raise DataError("min_active_fraction must lie in [0, 1]")
    counts = np.zeros(len(ds.user_pool), dtype=np.int64)
    for frame in frames:
        lo = np.searchsorted(ds.ts, int(frame.start.timestamp()), side="left")
        hi = np.searchsorted(ds.ts, int(frame.end.timestamp()), side="left")
        counts[np.unique(ds.user_codes[lo:hi])] += 1
    need = min_active_fraction * len(frames) - 1e-9
    present = np.unique(ds.user_codes)
    return {ds.user_pool[i] for i in present if counts[i] >= need}
