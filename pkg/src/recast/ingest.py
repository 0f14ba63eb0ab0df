"""Cascade corpus ingestion: parsing, validation, and exclusion rules.

Input formats:
  cascades.jsonl  one JSON object per line:
                  {"cascade_id": str, "events": [{"post_id", "user_id", "t",
                  "followers"}, ...]} with the original post listed first.
  followers.csv   two columns ``follower_id,followee_id`` with header;
                  edge (a -> b) means a follows b.

Records that cannot be used are rejected with a machine-readable reason
rather than aborting the stream; accepted + rejected always adds up to the
number of input records.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

# Rejection reasons, in precedence order.
REASON_MALFORMED = "MALFORMED"
REASON_MISSING_FOLLOWERS = "MISSING_FOLLOWERS"
REASON_TIMESTAMP_DISORDER = "TIMESTAMP_DISORDER"
REASON_TOO_SMALL = "TOO_SMALL"


@dataclass(frozen=True, slots=True)
class ReshareEvent:
    """One post or reshare: who, when (seconds), and their follower count
    as observed at posting time."""

    post_id: str
    user_id: str
    t: int
    followers: int


@dataclass(slots=True)
class Cascade:
    """Time-ordered event sequence; index 0 is the original post."""

    cascade_id: str
    events: list[ReshareEvent]

    @property
    def size(self) -> int:
        return len(self.events)

    def user_ids(self) -> list[str]:
        return [e.user_id for e in self.events]

    def times(self) -> list[int]:
        return [e.t for e in self.events]


@dataclass(frozen=True, slots=True)
class Rejection:
    cascade_id: str | None
    reason: str


@dataclass(frozen=True, slots=True)
class UserProfile:
    """Per-user summary: mean follower count over all of the user's events
    in the ingested corpus."""

    user_id: str
    mean_followers: float


class FollowerGraph:
    """Deduplicated directed follow relations; edge (a -> b) means a follows b."""

    def __init__(self) -> None:
        self._followees: dict[str, set[str]] = {}
        self._n_edges = 0

    def add(self, follower: str, followee: str) -> None:
        targets = self._followees.setdefault(follower, set())
        if followee not in targets:
            targets.add(followee)
            self._n_edges += 1

    def follows(self, a: str, b: str) -> bool:
        return b in self._followees.get(a, ())

    def followees(self, a: str) -> frozenset[str]:
        return frozenset(self._followees.get(a, ()))

    @property
    def n_edges(self) -> int:
        return self._n_edges

    def edges(self) -> Iterable[tuple[str, str]]:
        for follower in sorted(self._followees):
            for followee in sorted(self._followees[follower]):
                yield follower, followee


@dataclass(slots=True)
class FollowerParseResult:
    graph: FollowerGraph = field(default_factory=FollowerGraph)
    bad_rows: list[int] = field(default_factory=list)
    self_loops_dropped: int = 0


_MAX_COUNT = 2**53  # largest integer float64 represents exactly


def _as_count(value: object) -> int | None:
    """Non-negative integer from a JSON value, or None if unusable.

    Values beyond 2^53 are rejected: timestamps and follower counts flow
    through float64 arithmetic and would silently lose precision.
    """
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value if 0 <= value <= _MAX_COUNT else None
    if isinstance(value, float) and value.is_integer():
        return int(value) if 0 <= value <= _MAX_COUNT else None
    return None


def _parse_record(record: object) -> Cascade | str:
    """One cascade from a decoded JSON object, or a rejection reason."""
    if not isinstance(record, dict):
        return REASON_MALFORMED
    cascade_id = record.get("cascade_id")
    raw_events = record.get("events")
    if not isinstance(cascade_id, str) or not cascade_id or not isinstance(raw_events, list):
        return REASON_MALFORMED

    events: list[ReshareEvent] = []
    missing_followers = False
    seen_posts: set[str] = set()
    for raw in raw_events:
        if not isinstance(raw, dict):
            return REASON_MALFORMED
        post_id = raw.get("post_id")
        user_id = raw.get("user_id")
        if not isinstance(post_id, str) or not post_id or not isinstance(user_id, str) or not user_id:
            return REASON_MALFORMED
        if post_id in seen_posts:
            return REASON_MALFORMED
        seen_posts.add(post_id)
        t = _as_count(raw.get("t"))
        if t is None:
            return REASON_MALFORMED
        followers = _as_count(raw.get("followers"))
        if followers is None:
            missing_followers = True
            followers = 0
        events.append(ReshareEvent(post_id=post_id, user_id=user_id, t=t, followers=followers))

    if missing_followers:
        return REASON_MISSING_FOLLOWERS

    if events:
        root = events[0]
        if any(e.t < root.t for e in events[1:]):
            return REASON_TIMESTAMP_DISORDER

    if len(events) < 2:
        return REASON_TOO_SMALL

    # The declared original post stays at index 0 even on a timestamp tie;
    # the reshares get a unique total order from (t, post_id).
    ordered = [events[0]] + sorted(events[1:], key=lambda e: (e.t, e.post_id))
    return Cascade(cascade_id=cascade_id, events=ordered)


def parse_cascades(lines: Iterable[str]) -> tuple[list[Cascade], list[Rejection]]:
    """Parse a line-delimited cascade stream.

    Returns accepted cascades (events re-sorted by time) and one rejection
    per unusable record. Malformed lines reject individually; the stream
    continues.
    """
    accepted: list[Cascade] = []
    rejections: list[Rejection] = []
    for line in lines:
        line = line.strip()
        if not line:
            rejections.append(Rejection(None, REASON_MALFORMED))
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            rejections.append(Rejection(None, REASON_MALFORMED))
            continue
        result = _parse_record(record)
        if isinstance(result, Cascade):
            accepted.append(result)
        else:
            cid = record.get("cascade_id") if isinstance(record, dict) else None
            rejections.append(Rejection(cid if isinstance(cid, str) else None, result))
    return accepted, rejections


def parse_follower_edges(lines: Iterable[str]) -> FollowerParseResult:
    """Parse a follower-edge CSV into a deduplicated directed graph.

    Self-loops are dropped (count reported); rows with the wrong arity are
    recorded by line number and skipped.
    """
    result = FollowerParseResult()
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or [c.strip() for c in header] != ["follower_id", "followee_id"]:
        raise ValueError("expected CSV header 'follower_id,followee_id'")
    for row_number, row in enumerate(reader, start=2):
        if len(row) != 2 or not row[0] or not row[1]:
            result.bad_rows.append(row_number)
            continue
        follower, followee = row
        if follower == followee:
            result.self_loops_dropped += 1
            continue
        result.graph.add(follower, followee)
    return result


def compute_user_profiles(corpus: Iterable[Cascade]) -> dict[str, UserProfile]:
    """Mean follower count per user over every event in the corpus."""
    totals: dict[str, int] = {}
    counts: dict[str, int] = {}
    for cascade in corpus:
        for event in cascade.events:
            totals[event.user_id] = totals.get(event.user_id, 0) + event.followers
            counts[event.user_id] = counts.get(event.user_id, 0) + 1
    if not counts:
        raise ValueError("empty corpus")
    return {
        user: UserProfile(user_id=user, mean_followers=totals[user] / counts[user])
        for user in counts
    }


def mean_followers_list(cascade: Cascade, profiles: Mapping[str, UserProfile]) -> list[float]:
    """Per-event mean follower counts, in event order."""
    return [profiles[e.user_id].mean_followers for e in cascade.events]
