"""Sparse count histograms: the common currency of the distribution work.

A :class:`CountHistogram` maps a positive integer count (tweets sent, times
retweeted, node degree, ...) to the number of users/nodes with that count.
Zero counts are never stored; zero frequencies are dropped on construction.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

HISTOGRAM_KINDS = ("tweets", "retweets_sent", "times_retweeted")


@dataclass
class CountHistogram:
    """Sparse map count -> frequency with all counts >= 1."""

    entries: dict[int, int] = field(default_factory=dict)
    kind: str | None = None

    def __post_init__(self) -> None:
        clean: dict[int, int] = {}
        for count, freq in self.entries.items():
            c = int(count)
            f = int(freq)
            if c < 1:
                raise ValueError(f"histogram counts must be >= 1, got {c}")
            if f < 0:
                raise ValueError(f"histogram frequencies must be >= 0, got {f}")
            if f:
                clean[c] = clean.get(c, 0) + f
        self.entries = clean
        if self.kind is not None and self.kind not in HISTOGRAM_KINDS:
            raise ValueError(f"unknown histogram kind {self.kind!r}")

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.entries.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountHistogram):
            return NotImplemented
        return self.entries == other.entries

    @property
    def total(self) -> int:
        """Total mass (number of users/nodes represented)."""
        return sum(self.entries.values())

    @property
    def total_items(self) -> int:
        """Sum of count x frequency (number of underlying records)."""
        return sum(c * f for c, f in self.entries.items())

    @property
    def max_count(self) -> int:
        return max(self.entries) if self.entries else 0

    def add(self, count: int, freq: int = 1) -> None:
        if count < 1 or freq < 0:
            raise ValueError("count must be >= 1 and freq >= 0")
        if freq:
            self.entries[count] = self.entries.get(count, 0) + freq

    def merge(self, other: "CountHistogram") -> "CountHistogram":
        """Histogram of the union of two disjoint record shards."""
        merged = dict(self.entries)
        for c, f in other.entries.items():
            merged[c] = merged.get(c, 0) + f
        return CountHistogram(merged, kind=self.kind)

    # -- array views ---------------------------------------------------

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(counts, frequencies) as ascending int64 arrays."""
        if not self.entries:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        counts = np.array(sorted(self.entries), dtype=np.int64)
        freqs = np.array([self.entries[int(c)] for c in counts], dtype=np.int64)
        return counts, freqs

    def expand(self) -> np.ndarray:
        """One value per user, ascending.  Memory scales with total mass."""
        counts, freqs = self.arrays()
        return np.repeat(counts, freqs)

    @classmethod
    def from_values(cls, values: Iterable[int], kind: str | None = None) -> "CountHistogram":
        entries: dict[int, int] = {}
        for v in values:
            v = int(v)
            entries[v] = entries.get(v, 0) + 1
        return cls(entries, kind=kind)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], kind: str | None = None) -> "CountHistogram":
        return cls(dict(mapping), kind=kind)

    # -- serialization -------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("count,frequency\n")
        for c, f in self:
            buf.write(f"{c},{f}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str | None = None) -> "CountHistogram":
        entries: dict[int, int] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.lower().startswith("count"):
                continue
            c_str, f_str = line.split(",")
            c, f = int(c_str), int(float(f_str))
            if f:
                entries[c] = entries.get(c, 0) + f
        return cls(entries, kind=kind)
