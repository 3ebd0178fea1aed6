"""Model checks and empirical statistics for heavy-tailed data.

Goodness-of-fit comes in two deliberately contrasted flavors: the G-test
against binned data (which an over-smoothed binning can render toothless)
and the Kolmogorov-Smirnov test against the raw empirical distribution with
a parametric bootstrap for its p-value.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats as sp_stats

from ..counts import CountHistogram
from .binning import BinnedDensity, log_bin_values

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Empirical hazard
# ---------------------------------------------------------------------------


def hazard_empirical(
    hist: CountHistogram, min_survivors: int = 50
) -> tuple[np.ndarray, np.ndarray]:
    """h(x) = freq(x) / sum_{y >= x} freq(y), where enough users survive.

    Points whose denominator falls below ``min_survivors`` are suppressed;
    the far tail is otherwise pure noise.
    """
    if not hist:
        raise ValueError("empty histogram")
    counts, freqs = hist.arrays()
    survivors = freqs[::-1].cumsum()[::-1]
    keep = survivors >= min_survivors
    return counts[keep].astype(np.float64), freqs[keep] / survivors[keep]


def loglog_slope(
    x: np.ndarray, y: np.ndarray, weights: np.ndarray | None = None
) -> tuple[float, float]:
    """Weighted least-squares slope and intercept of log y on log x."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    keep = (x > 0) & (y > 0)
    if weights is None:
        w = np.ones(keep.sum())
    else:
        w = np.asarray(weights, dtype=np.float64)[keep]
    lx, ly = np.log(x[keep]), np.log(y[keep])
    if lx.size < 2 or np.ptp(lx) == 0:
        raise ValueError("need at least two distinct positive points")
    wsum = w.sum()
    mx, my = np.dot(w, lx) / wsum, np.dot(w, ly) / wsum
    cov = np.dot(w, (lx - mx) * (ly - my))
    var = np.dot(w, (lx - mx) ** 2)
    slope = cov / var
    return float(slope), float(my - slope * mx)


def binned_slope(
    binned: BinnedDensity, x_lo: float, x_hi: float, weighted: bool = True
) -> float:
    """Log-log slope of a binned density over [x_lo, x_hi].

    Weighted by bin mass by default; ``weighted=False`` treats every
    occupied bin equally, which is what a straight line fitted by eye to a
    log-log plot does.
    """
    centers = binned.centers
    keep = (centers >= x_lo) & (centers <= x_hi) & (binned.counts > 0)
    weights = binned.counts[keep] if weighted else None
    slope, _ = loglog_slope(centers[keep], binned.heights[keep], weights)
    return slope


# ---------------------------------------------------------------------------
# G-test against binned data
# ---------------------------------------------------------------------------


@dataclass
class GTestResult:
    statistic: float
    p_value: float
    dof: int
    bins_used: int


def g_test(
    binned: BinnedDensity,
    model,
    min_expected: float = 5.0,
    scale: float = 100.0,
) -> GTestResult:
    """G = 2 sum O ln(O/E) of a binned density against a model's bin masses.

    This is a test of the binned *shape*: observed and expected bin masses
    are both expressed on a fixed ``scale`` (percentages by default), so
    its sensitivity does not grow with the underlying sample size.  That is
    the methodological trap it exists to demonstrate: a binning that makes
    the plotted points hug a line will pass here no matter how much raw
    data disagrees.  Use the KS test against the raw empirical distribution
    for a properly powered check.

    ``model`` needs ``bin_mass(lo, hi)`` and ``n_params``.  Bins expecting
    less than ``min_expected`` units merge rightward; dof = merged bins -
    n_params - 1, and fewer than one dof raises.
    """
    mass = binned.heights * binned.widths
    total = mass.sum()
    if total <= 0:
        raise ValueError("binned data is empty")
    observed = mass / total * scale
    expected = np.array(
        [model.bin_mass(lo, hi) for lo, hi in zip(binned.edges[:-1], binned.edges[1:])],
        dtype=np.float64,
    )
    if expected.sum() <= 0:
        raise ValueError("model puts no mass on the binned range")
    expected = expected / expected.sum() * scale

    obs_m, exp_m = _merge_bins(observed, expected, min_expected)
    dof = len(obs_m) - getattr(model, "n_params", 0) - 1
    if dof < 1:
        raise ValueError(f"only {len(obs_m)} usable bins; too few for the test")
    nz = obs_m > 0
    stat = 2.0 * float(np.sum(obs_m[nz] * np.log(obs_m[nz] / exp_m[nz])))
    p = float(sp_stats.chi2.sf(stat, dof))
    return GTestResult(statistic=stat, p_value=p, dof=dof, bins_used=len(obs_m))


def _merge_bins(observed: np.ndarray, expected: np.ndarray, min_expected: float):
    obs_out, exp_out = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 or o_acc > 0:
        if exp_out:
            obs_out[-1] += o_acc
            exp_out[-1] += e_acc
        else:
            obs_out, exp_out = [o_acc], [e_acc]
    return np.asarray(obs_out), np.asarray(exp_out)


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov with parametric bootstrap
# ---------------------------------------------------------------------------


@dataclass
class KSResult:
    statistic: float
    p_value: float
    n_boot: int


def ks_distance(data, model) -> float:
    """sup |EDF - CDF|, handling discrete atoms from both sides."""
    if isinstance(data, CountHistogram):
        values, freqs = data.arrays()
        n = freqs.sum()
        edf_hi = np.cumsum(freqs) / n
        edf_lo = edf_hi - freqs / n
        cdf_hi = np.asarray(model.cdf(values), dtype=np.float64)
        with np.errstate(over="ignore"):
            pmf = np.exp(model.log_density(values))
        cdf_lo = cdf_hi - pmf
        return float(max(np.max(np.abs(edf_hi - cdf_hi)), np.max(np.abs(edf_lo - cdf_lo))))
    values = np.sort(np.asarray(data, dtype=np.float64))
    n = values.size
    cdf = np.asarray(model.cdf(values), dtype=np.float64)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def ks_test(
    data,
    model,
    n_boot: int = 1000,
    seed: int | np.random.Generator = 0,
    refit: Callable | None = None,
) -> KSResult:
    """KS statistic with a parametric-bootstrap p-value.

    Each resample is drawn from ``model``; when ``refit`` is given the
    resample is refitted before measuring its distance, which is what makes
    the p-value uniform when the model family actually generated the data.
    p = (1 + #exceedances) / (1 + n_boot).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d_obs = ks_distance(data, model)
    if isinstance(data, CountHistogram):
        n = data.total
        discrete = True
    else:
        n = len(data)
        discrete = False
    exceed = 0
    for _ in range(n_boot):
        synth = model.sample(n, rng)
        synth_data = CountHistogram.from_values(synth) if discrete else synth
        boot_model = refit(synth_data) if refit is not None else model
        if ks_distance(synth_data, boot_model) >= d_obs:
            exceed += 1
    p = (1 + exceed) / (1 + n_boot)
    return KSResult(statistic=d_obs, p_value=p, n_boot=n_boot)


# ---------------------------------------------------------------------------
# Vuong-style likelihood ratio
# ---------------------------------------------------------------------------


def likelihood_ratio(
    model_a, model_b, data, significance_z: float = 1.96
) -> tuple[float, str]:
    """Normalized log-likelihood ratio and which model it prefers.

    Returns (z, verdict) with verdict in {'A', 'B', 'inconclusive'}; z is the
    pointwise log-ratio sum over its standard error.  Models with identical
    pointwise likelihoods are inconclusive by construction.
    """
    if isinstance(data, CountHistogram):
        values, freqs = data.arrays()
        w = freqs.astype(np.float64)
        diffs = model_a.log_density(values) - model_b.log_density(values)
        n = w.sum()
        mean = float(np.dot(w, diffs) / n)
        var = float(np.dot(w, (diffs - mean) ** 2) / n)
        total = mean * n
    else:
        x = np.asarray(data, dtype=np.float64)
        diffs = model_a.log_density(x) - model_b.log_density(x)
        n = x.size
        mean = float(diffs.mean())
        var = float(diffs.var())
        total = float(diffs.sum())
    if var <= 0 or not np.isfinite(var):
        return 0.0, "inconclusive"
    z = total / math.sqrt(n * var)
    if z > significance_z:
        return float(z), "A"
    if z < -significance_z:
        return float(z), "B"
    return float(z), "inconclusive"


# ---------------------------------------------------------------------------
# Kendall rank correlation
# ---------------------------------------------------------------------------


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Tau-b with tie correction and a normal-approximation p-value."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("x and y must have equal length")
    if x.size < 2:
        raise ValueError("need at least two pairs")
    res = sp_stats.kendalltau(x, y, variant="b", method="asymptotic")
    return float(res.statistic), float(res.pvalue)


# ---------------------------------------------------------------------------
# Interevent scaling collapse
# ---------------------------------------------------------------------------


@dataclass
class CollapseResult:
    """Scaled per-group densities and how far apart they maximally sit."""

    metric: float
    group_densities: list[BinnedDensity]
    group_means: list[float]


def scale_collapse(series, bins_per_decade: int = 8, min_intervals: int = 1000) -> CollapseResult:
    """Density of gap / group-mean per group, and the worst pairwise L1 gap.

    Groups whose gap distributions share a common shape land on one curve
    after rescaling by their own mean; the metric is the maximum over group
    pairs of the integrated absolute density difference on the overlap of
    their supports.
    """
    scaled: list[np.ndarray] = []
    means: list[float] = []
    for lo, hi, gaps in series.groups:
        gaps = np.asarray(gaps, dtype=np.float64)
        gaps = gaps[gaps > 0]
        if gaps.size < min_intervals:
            raise ValueError(
                f"group {lo}:{hi} has {gaps.size} positive intervals; need {min_intervals}"
            )
        mean = float(gaps.mean())
        scaled.append(gaps / mean)
        means.append(mean)

    pooled_min = min(s.min() for s in scaled)
    pooled_max = max(s.max() for s in scaled)
    edges = _shared_log_edges(pooled_min, pooled_max, bins_per_decade)
    densities = []
    for s in scaled:
        idx = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, len(edges) - 2)
        mass = np.bincount(idx, minlength=len(edges) - 1).astype(np.float64)
        heights = mass / np.diff(edges) / s.size
        densities.append(BinnedDensity(edges=edges, heights=heights, counts=mass, total=s.size))

    metric = 0.0
    widths = np.diff(edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    for i in range(len(scaled)):
        for j in range(i + 1, len(scaled)):
            lo = max(scaled[i].min(), scaled[j].min())
            hi = min(scaled[i].max(), scaled[j].max())
            inside = (centers >= lo) & (centers <= hi)
            l1 = float(
                np.dot(np.abs(densities[i].heights - densities[j].heights)[inside], widths[inside])
            )
            metric = max(metric, l1)
    return CollapseResult(metric=metric, group_densities=densities, group_means=means)


def _shared_log_edges(lo: float, hi: float, bins_per_decade: int) -> np.ndarray:
    k_lo = math.floor(bins_per_decade * math.log10(lo))
    k_hi = math.ceil(bins_per_decade * math.log10(hi))
    if k_hi <= k_lo:
        k_hi = k_lo + 1
    edges = 10.0 ** (np.arange(k_lo, k_hi + 1) / bins_per_decade)
    edges[0] = min(edges[0], lo) * (1 - 1e-12)
    return edges
