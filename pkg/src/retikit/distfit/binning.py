"""Logarithmic and equal-count binning of count histograms.

Both produce a :class:`BinnedDensity` whose heights integrate to one.
Equal-count binning puts the same number of samples in every bin and is kept
here mainly so its tail-flattering behavior can be demonstrated against
logarithmic binning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..counts import CountHistogram


@dataclass
class BinnedDensity:
    """Density on contiguous bins: edges (len B+1), heights and counts (len B)."""

    edges: np.ndarray
    heights: np.ndarray
    counts: np.ndarray
    total: int

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.float64)
        self.heights = np.asarray(self.heights, dtype=np.float64)
        self.counts = np.asarray(self.counts, dtype=np.float64)
        if len(self.edges) != len(self.heights) + 1:
            raise ValueError("need one more edge than heights")
        if np.any(np.diff(self.edges) <= 0):
            raise ValueError("edges must be strictly ascending")

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def centers(self) -> np.ndarray:
        """Geometric bin centers (natural for log-scale plotting)."""
        return np.sqrt(self.edges[:-1] * self.edges[1:])

    def integral(self) -> float:
        return float(np.dot(self.heights, self.widths))

    def occupied(self) -> np.ndarray:
        return self.counts > 0

    def truncate(self, x_min: float) -> "BinnedDensity":
        """Bins whose lower edge is at or above ``x_min`` (for tail fits)."""
        first = int(np.searchsorted(self.edges, x_min - 1e-9))
        if first >= len(self.heights):
            raise ValueError(f"no bins at or above {x_min}")
        return BinnedDensity(
            edges=self.edges[first:],
            heights=self.heights[first:],
            counts=self.counts[first:],
            total=int(self.counts[first:].sum()),
        )


def log_bin(hist: CountHistogram, bins_per_decade: int = 10) -> BinnedDensity:
    """Bin a count histogram on edges at 10^(k / bins_per_decade)."""
    if not hist:
        raise ValueError("cannot bin an empty histogram")
    counts, freqs = hist.arrays()
    return _log_bin_weighted(counts.astype(np.float64), freqs.astype(np.float64),
                             bins_per_decade)


def log_bin_values(values, bins_per_decade: int = 10) -> BinnedDensity:
    """Log-bin raw positive values (continuous data)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot bin empty data")
    if np.any(values <= 0):
        raise ValueError("log binning needs positive values")
    return _log_bin_weighted(values, np.ones_like(values), bins_per_decade)


def _log_bin_weighted(values: np.ndarray, weights: np.ndarray,
                      bins_per_decade: int) -> BinnedDensity:
    if bins_per_decade < 1:
        raise ValueError("bins_per_decade must be >= 1")
    lo = np.floor(bins_per_decade * np.log10(values.min()))
    hi = np.ceil(bins_per_decade * np.log10(values.max()))
    if hi <= lo:
        hi = lo + 1
    ks = np.arange(lo, hi + 1)
    edges = 10.0 ** (ks / bins_per_decade)
    # guard values sitting exactly on the min edge against float roundoff
    edges[0] = min(edges[0], values.min()) * (1 - 1e-12)
    idx = np.clip(np.searchsorted(edges, values, side="right") - 1, 0, len(edges) - 2)
    mass = np.bincount(idx, weights=weights, minlength=len(edges) - 1)
    total = float(weights.sum())
    heights = mass / np.diff(edges) / total
    return BinnedDensity(edges=edges, heights=heights, counts=mass, total=int(round(total)))


def equal_count_bin(hist: CountHistogram, num_bins: int) -> BinnedDensity:
    """Bins sized to hold the same number of samples each.

    The last bin takes the remainder.  Edges sit halfway between the last
    value of one bin and the first of the next, so wide sparse-tail bins get
    proportionally low heights.
    """
    if num_bins < 1:
        raise ValueError("need at least one bin")
    total = hist.total
    if total < num_bins:
        raise ValueError(f"total mass {total} is below the bin count {num_bins}")
    counts, freqs = hist.arrays()
    per_bin = total // num_bins

    cut_values = []  # last distinct value included in each bin
    acc = 0
    filled = 0
    for value, freq in zip(counts, freqs):
        acc += freq
        while filled < num_bins - 1 and acc >= (filled + 1) * per_bin:
            cut_values.append(value)
            filled += 1
    edges = [counts[0] - 0.5]
    for cv in cut_values:
        nxt = counts[np.searchsorted(counts, cv, side="right")] if cv < counts[-1] else None
        edge = (cv + nxt) / 2.0 if nxt is not None else cv + 0.5
        if edge > edges[-1]:
            edges.append(edge)
    if counts[-1] + 0.5 > edges[-1]:
        edges.append(counts[-1] + 0.5)
    edges = np.asarray(edges, dtype=np.float64)

    idx = np.clip(np.searchsorted(edges, counts, side="right") - 1, 0, len(edges) - 2)
    mass = np.bincount(idx, weights=freqs.astype(np.float64), minlength=len(edges) - 1)
    heights = mass / np.diff(edges) / total
    return BinnedDensity(edges=edges, heights=heights, counts=mass, total=total)
