"""Tweet record parsing, retweet detection, and derived structures.

Input is newline-delimited, tab-separated records::

    author <TAB> timestamp <TAB> retweet_of-or-empty <TAB> text

The text field is last so embedded tabs cannot corrupt earlier fields.  All
operations are pure over their record sequences: histograms from disjoint
shards add, graphs merge by weight addition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .counts import CountHistogram
from .graphs import WeightedDigraph

# Organic retweet syntax: a marker token (rt / retweet / retweeting / via)
# at the start of the text or after a non-word character, then an optional
# colon and an @-handle of 1-20 word characters, terminated by a non-word
# character or end of text.  ASCII character classes deliberately: handles
# are ASCII and the marker must not absorb surrounding non-Latin text.
RETWEET_PATTERN = re.compile(
    r"(?:^|\W)(?:rt|retweet(?:ing)?|via)"
    r"\s*:?\s*@\s*([a-zA-Z0-9_]{1,20})"
    r"(?:$|\W)",
    re.IGNORECASE | re.ASCII,
)


def detect_retweet(text: str) -> str | None:
    """Username of the first retweet marker in ``text``, or None.

    Total function: any unicode string is accepted.
    """
    m = RETWEET_PATTERN.search(text)
    return m.group(1) if m else None


@dataclass(frozen=True)
class TweetRecord:
    """One tweet: who sent it, when, the body, and platform retweet metadata."""

    author: str
    timestamp: int
    text: str = ""
    retweet_of: str | None = None

    def __post_init__(self):
        if not self.author:
            raise ValueError("author must be nonempty")
        if len(self.author) > 64:
            raise ValueError("author identifiers are capped at 64 chars")
        if self.timestamp < 0:
            raise ValueError("timestamp must be >= 0")


def normalize_user(name: str) -> str:
    """Handles are case-insensitive; compare after ASCII lowercasing."""
    return name.strip().lower()


def resolve_retweet_target(record: TweetRecord) -> str | None:
    """Retweetee of a record, platform metadata first, syntax as fallback."""
    if record.retweet_of:
        return normalize_user(record.retweet_of)
    detected = detect_retweet(record.text)
    return normalize_user(detected) if detected else None


def parse_records(text: str) -> list[TweetRecord]:
    """Parse TSV tweet records; raises ValueError with the bad line number."""
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t", 3)
        if len(parts) < 2:
            raise ValueError(f"line {lineno}: expected at least author and timestamp")
        author = normalize_user(parts[0])
        try:
            timestamp = int(parts[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad timestamp {parts[1]!r}") from exc
        retweet_of = parts[2].strip() if len(parts) > 2 and parts[2].strip() else None
        body = parts[3] if len(parts) > 3 else ""
        records.append(TweetRecord(author, timestamp, body, retweet_of))
    return records


def records_to_tsv(records: list[TweetRecord]) -> str:
    lines = []
    for r in records:
        rt = r.retweet_of or ""
        lines.append(f"{r.author}\t{r.timestamp}\t{rt}\t{r.text}")
    return "\n".join(lines) + ("\n" if lines else "")


def build_count_histogram(records: list[TweetRecord], kind: str) -> CountHistogram:
    """Per-user activity histogram.

    kind='tweets' counts original messages per author (retweets excluded),
    'retweets_sent' counts retweets per author, 'times_retweeted' counts
    retweets per retweetee.  Users with count zero are absent.
    """
    tally: dict[str, int] = {}
    for record in records:
        target = resolve_retweet_target(record)
        if kind == "tweets":
            if target is None:
                key = normalize_user(record.author)
                tally[key] = tally.get(key, 0) + 1
        elif kind == "retweets_sent":
            if target is not None:
                key = normalize_user(record.author)
                tally[key] = tally.get(key, 0) + 1
        elif kind == "times_retweeted":
            if target is not None:
                tally[target] = tally.get(target, 0) + 1
        else:
            raise ValueError(f"unknown histogram kind {kind!r}")
    return CountHistogram.from_values(tally.values(), kind=kind)


def build_retweet_graph(records: list[TweetRecord]) -> WeightedDigraph:
    """Directed graph: edge u->v weighted by how many times u retweeted v.

    Retweetees that never appear as authors still get a node; self-retweets
    are dropped.
    """
    g = WeightedDigraph()
    for record in records:
        target = resolve_retweet_target(record)
        if target is None:
            continue
        author = normalize_user(record.author)
        if author == target:
            continue
        g.add_edge(author, target, 1)
    return g


@dataclass
class IntervalSeries:
    """Consecutive-tweet gaps grouped by the author's total tweet count.

    groups[i] = (lower_bound, upper_bound, interval array); group_means[i]
    is that group's average gap in seconds.
    """

    groups: list[tuple[int, int, np.ndarray]] = field(default_factory=list)
    group_means: list[float] = field(default_factory=list)
    skipped_negative: int = 0

    def group_sizes(self) -> list[int]:
        return [len(iv) for _, _, iv in self.groups]


def extract_intervals(
    records: list[TweetRecord],
    group_bounds: list[tuple[int, int]],
) -> IntervalSeries:
    """Per-user inter-tweet gaps, grouped by total tweet count.

    group_bounds are inclusive (lower, upper) count ranges, ascending and
    non-overlapping.  A user's gaps are the differences of their timestamps
    sorted ascending; a negative gap (possible only with unsorted input
    feeding future variants) would be dropped and counted.
    """
    _validate_bounds(group_bounds)
    per_user: dict[str, list[int]] = {}
    for record in records:
        per_user.setdefault(normalize_user(record.author), []).append(record.timestamp)

    grouped: list[list[int]] = [[] for _ in group_bounds]
    skipped = 0
    for stamps in per_user.values():
        count = len(stamps)
        gi = _group_of(count, group_bounds)
        if gi is None:
            continue
        stamps.sort()
        for a, b in zip(stamps, stamps[1:]):
            gap = b - a
            if gap < 0:
                skipped += 1
                continue
            grouped[gi].append(gap)

    series = IntervalSeries(skipped_negative=skipped)
    for (lo, hi), gaps in zip(group_bounds, grouped):
        arr = np.asarray(gaps, dtype=np.float64)
        series.groups.append((lo, hi, arr))
        series.group_means.append(float(arr.mean()) if arr.size else float("nan"))
    return series


def _validate_bounds(bounds: list[tuple[int, int]]) -> None:
    if not bounds:
        raise ValueError("at least one group bound required")
    prev_hi = 0
    for lo, hi in bounds:
        if lo > hi:
            raise ValueError(f"bound ({lo},{hi}) has lower > upper")
        if lo <= prev_hi and prev_hi > 0:
            raise ValueError("group bounds must be ascending and non-overlapping")
        prev_hi = hi


def _group_of(count: int, bounds: list[tuple[int, int]]) -> int | None:
    for i, (lo, hi) in enumerate(bounds):
        if lo <= count <= hi:
            return i
    return None


def parse_bounds_spec(spec: str) -> list[tuple[int, int]]:
    """Parse 'a:b,c:d,...' into inclusive (lower, upper) pairs."""
    bounds = []
    for part in spec.split(","):
        lo_str, hi_str = part.split(":")
        bounds.append((int(lo_str), int(hi_str)))
    _validate_bounds(bounds)
    return bounds
