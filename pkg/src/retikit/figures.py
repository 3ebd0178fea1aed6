"""Render figure files next to the delimited outputs.

Every report-producing CLI path can also draw its data with matplotlib when
asked; the CSV stays the canonical artifact, the PNG is a convenience view.
All functions take already-computed structures and a target path.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .counts import CountHistogram
from .distfit.binning import BinnedDensity

DPI = 150


def _save(fig, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)


def plot_histogram(hist: CountHistogram, path: str, title: str = "count distribution") -> None:
    counts, freqs = hist.arrays()
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(counts, freqs, ".", markersize=3)
    ax.set_xlabel("count")
    ax.set_ylabel("frequency")
    ax.set_title(title)
    _save(fig, path)


def plot_binned(binned: BinnedDensity, path: str, title: str = "binned density") -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    occ = binned.counts > 0
    ax.loglog(binned.centers[occ], binned.heights[occ], "o-", markersize=3)
    ax.set_xlabel("value")
    ax.set_ylabel("density")
    ax.set_title(title)
    _save(fig, path)


def plot_hazard(x: np.ndarray, h: np.ndarray, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(x, h, ".", markersize=3)
    ax.set_xlabel("count")
    ax.set_ylabel("stopping hazard")
    _save(fig, path)


def plot_collapse(densities: list[BinnedDensity], path: str) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    for i, d in enumerate(densities):
        occ = d.counts > 0
        ax.loglog(d.centers[occ], d.heights[occ], "o-", markersize=3, label=f"group {i}")
    ax.set_xlabel("gap / group mean")
    ax.set_ylabel("density")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_degree_histograms(in_hist: CountHistogram, out_hist: CountHistogram, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    for hist, label in ((in_hist, "in"), (out_hist, "out")):
        counts, freqs = hist.arrays()
        ax.loglog(counts, freqs, ".", markersize=3, label=label)
    ax.set_xlabel("degree")
    ax.set_ylabel("nodes")
    ax.legend()
    _save(fig, path)


def plot_roc(points: list[tuple[float, float, float]], path: str) -> None:
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    fpr = [p[0] for p in points]
    tpr = [p[1] for p in points]
    ax.plot(fpr, tpr, "o-", markersize=3)
    ax.plot([0, 1], [0, 1], ":", color="gray", linewidth=1)
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.02)
    _save(fig, path)


def plot_sweep(rows: list, path: str) -> None:
    """TPR/FPR scatter, one marker per sweep cell, sized by bs_rate."""
    fig, ax = plt.subplots(figsize=(5, 4.5))
    densities = sorted({r.benign_density for r in rows})
    cmap = plt.get_cmap("viridis")
    for i, d in enumerate(densities):
        cell = [r for r in rows if r.benign_density == d]
        sizes = [20 + 80 * r.bs_rate for r in cell]
        ax.scatter(
            [r.fpr for r in cell], [r.tpr for r in cell],
            s=sizes, color=cmap(i / max(len(densities) - 1, 1)),
            label=f"density {d:g}", alpha=0.8,
        )
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.legend(fontsize=7)
    _save(fig, path)
