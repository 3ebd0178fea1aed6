"""Recover population count distributions from a p-thinned sample.

A platform sample that keeps each item independently with probability p
censors users entirely when all their items are dropped and shifts the
observed counts of the rest.  Given the observed histogram g over counts
j >= 1, an EM iteration recovers phi_i = P(a user sent i items | at least
one observed) and then the population frequencies f_hat.

The observation model:  a user with i items is seen with j of them with
probability

    c_{i,j} = C(i,j) p^j (1-p)^(i-j) / (1 - (1-p)^i),   1 <= j <= i,

the binomial probability conditioned on at least one success.  The EM
update in matrix form is

    phi <- (1/gamma) * phi * (C @ (g / (C.T @ phi))),

which leaves sum(phi) = 1 and never decreases the observed-data
log-likelihood  sum_j g_j log((C.T phi)_j).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse, stats

from .counts import CountHistogram

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
SUPPORT_CAP_FACTOR = 10
PHI_FLOOR = 1e-12
SPARSE_DROP = 1e-15


@dataclass(frozen=True)
class ThinningModel:
    """Sampling probability and support cap for the EM recovery."""

    p: float
    max_count: int

    def __post_init__(self):
        if not (0.0 < self.p <= 1.0):
            raise ValueError("sampling probability must be in (0, 1]")
        if self.max_count < 1:
            raise ValueError("max_count must be >= 1")


@dataclass
class PopulationEstimate:
    """EM output: phi over 1..I, recovered frequencies, and diagnostics."""

    phi: np.ndarray
    f_hat: np.ndarray
    gamma: int
    iterations: int
    final_delta: float
    converged: bool
    loglik: float
    loglik_trace: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))

    def f_hat_histogram(self, min_frequency: float = 0.5) -> CountHistogram:
        """Rounded frequencies as a histogram, dropping sub-threshold tail."""
        entries = {}
        for i, fh in enumerate(self.f_hat, start=1):
            r = int(round(fh))
            if fh >= min_frequency and r >= 1:
                entries[i] = r
        return CountHistogram(entries)


def conditional_binomial(i: int, j: int, p: float) -> float:
    """P(j observed | i sent, at least one observed) for one (i, j)."""
    if not (0.0 < p <= 1.0):
        raise ValueError("p must be in (0, 1]")
    if j < 1 or j > i:
        raise ValueError(f"need 1 <= j <= i, got i={i}, j={j}")
    if p == 1.0:
        return 1.0 if i == j else 0.0
    log_num = stats.binom.logpmf(j, i, p)
    # log(1 - (1-p)^i) without cancellation
    log_denom = np.log1p(-np.exp(i * np.log1p(-p)))
    return float(np.exp(log_num - log_denom))


def _conditional_matrix(p: float, support: int, observed: np.ndarray) -> sparse.csr_matrix:
    """Rows i = 1..support, one column per observed count; entries c_{i,j}."""
    i_vals = np.arange(1, support + 1, dtype=np.float64)
    if p == 1.0:
        log_denom = np.zeros(support)
    else:
        log_denom = np.log1p(-np.exp(i_vals * np.log1p(-p)))
    cols = []
    for j in observed:
        with np.errstate(divide="ignore"):
            log_pmf = stats.binom.logpmf(int(j), i_vals, p)
        col = np.exp(log_pmf - log_denom)
        col[i_vals < j] = 0.0
        col[col < SPARSE_DROP] = 0.0
        cols.append(sparse.csr_matrix(col.reshape(-1, 1)))
    return sparse.hstack(cols, format="csr")


def default_support_cap(g: CountHistogram, p: float) -> int:
    """Support cap: 10x the maximum observed count (at least the max)."""
    m = g.max_count
    if p == 1.0:
        return m
    return max(m, SUPPORT_CAP_FACTOR * m)


def em_estimate(
    g: CountHistogram,
    model: ThinningModel,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> PopulationEstimate:
    """EM recovery of the population histogram behind observation ``g``.

    Stops when the max absolute change in phi drops below ``tol`` or after
    ``max_iter`` iterations (reported, not an error).  Raises ValueError when
    ``g`` is empty, tol is not positive, or an observed count exceeds the
    support cap.
    """
    if not g:
        raise ValueError("observed histogram is empty")
    if tol <= 0:
        raise ValueError("tol must be positive")
    observed, freqs = g.arrays()
    support = model.max_count
    if observed[-1] > support:
        raise ValueError(
            f"observed count {observed[-1]} exceeds support cap {support}"
        )

    gamma = int(freqs.sum())
    g_vec = freqs.astype(np.float64)
    C = _conditional_matrix(model.p, support, observed)

    # Warm start: the observed shape lifted unchanged, floored and normalized.
    phi = np.full(support, PHI_FLOOR)
    phi[observed - 1] = np.maximum(g_vec / gamma, PHI_FLOOR)
    phi /= phi.sum()

    trace = []
    delta = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        mix = C.T @ phi                      # P(observe j) under current phi
        trace.append(float(np.dot(g_vec, np.log(mix))))
        phi_new = phi * (C @ (g_vec / mix)) / gamma
        phi_new /= phi_new.sum()             # guard drift; sum is 1 analytically
        delta = float(np.max(np.abs(phi_new - phi)))
        phi = phi_new
        if delta < tol:
            break
    converged = delta < tol
    if not converged:
        logger.warning("EM stopped at max_iter=%d with delta=%.3g", max_iter, delta)

    mix = C.T @ phi
    trace.append(float(np.dot(g_vec, np.log(mix))))

    i_vals = np.arange(1, support + 1, dtype=np.float64)
    if model.p == 1.0:
        seen_prob = np.ones(support)
    else:
        seen_prob = -np.expm1(i_vals * np.log1p(-model.p))  # 1 - (1-p)^i
    f_hat = gamma * phi / seen_prob

    return PopulationEstimate(
        phi=phi,
        f_hat=f_hat,
        gamma=gamma,
        iterations=iterations,
        final_delta=delta,
        converged=converged,
        loglik=trace[-1],
        loglik_trace=np.asarray(trace),
    )


def thin_histogram(
    f: CountHistogram, p: float, seed: int | np.random.Generator
) -> CountHistogram:
    """Simulate the sampling process: keep each item with probability p.

    Users retaining zero items vanish.  Round-trip oracle for em_estimate.
    """
    if not (0.0 < p <= 1.0):
        raise ValueError("p must be in (0, 1]")
    if p == 1.0:
        return CountHistogram(dict(f.entries), kind=f.kind)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    entries: dict[int, int] = {}
    for count, freq in f:
        kept = rng.binomial(count, p, size=freq)
        kept = kept[kept > 0]
        for j, n in zip(*np.unique(kept, return_counts=True)):
            entries[int(j)] = entries.get(int(j), 0) + int(n)
    return CountHistogram(entries, kind=f.kind)


# ---------------------------------------------------------------------------
# Bivariate extension: joint (i1, i2) tuples thinned independently per
# coordinate, a tuple being observed iff at least one item of either
# coordinate survives.  Used to recover edge-weight pair distributions
# (retweets in both directions) and hence reciprocity.
# ---------------------------------------------------------------------------


@dataclass
class JointPopulationEstimate:
    """EM output over the (i1, i2) grid, i1 + i2 >= 1."""

    phi: np.ndarray          # (I+1, I+1), entry [0, 0] fixed at zero
    f_hat: np.ndarray
    gamma: int
    iterations: int
    final_delta: float
    converged: bool
    loglik: float
    loglik_trace: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))


def em_estimate_joint(
    g2: dict[tuple[int, int], int],
    model: ThinningModel,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> JointPopulationEstimate:
    """Joint EM over count pairs under independent per-coordinate thinning.

    ``g2`` maps observed (j1, j2) with j1 + j2 >= 1 to frequencies.  The
    conditional matrix entries are products of plain binomials divided by
    the probability the tuple is observed at all, 1 - (1-p)^(i1+i2).
    """
    if not g2:
        raise ValueError("observed joint histogram is empty")
    if tol <= 0:
        raise ValueError("tol must be positive")
    for (j1, j2), freq in g2.items():
        if j1 < 0 or j2 < 0 or j1 + j2 < 1:
            raise ValueError(f"invalid observed tuple ({j1}, {j2})")
        if freq < 0:
            raise ValueError("frequencies must be >= 0")

    I = model.max_count
    p = model.p
    max_obs = max(max(j1, j2) for (j1, j2) in g2)
    if max_obs > I:
        raise ValueError(f"observed count {max_obs} exceeds support cap {I}")

    J = max_obs
    G = np.zeros((J + 1, J + 1))
    for (j1, j2), freq in g2.items():
        G[j1, j2] += freq
    gamma = int(G.sum())

    # U[i, j] = plain Binomial(i, p) pmf at j, for i, j on the padded grids.
    i_grid = np.arange(I + 1)
    j_grid = np.arange(J + 1)
    with np.errstate(divide="ignore"):
        U = np.exp(stats.binom.logpmf(j_grid[None, :], i_grid[:, None], p))
    U = np.nan_to_num(U)

    tot = i_grid[:, None] + i_grid[None, :]
    with np.errstate(divide="ignore"):
        seen_prob = -np.expm1(tot * np.log1p(-p)) if p < 1.0 else np.ones_like(tot, float)
    seen_prob[0, 0] = 1.0  # unused cell; avoids divide-by-zero

    phi = np.zeros((I + 1, I + 1))
    phi[: J + 1, : J + 1] = np.maximum(G / gamma, 0.0)
    phi[phi == 0] = PHI_FLOOR
    phi[0, 0] = 0.0
    phi /= phi.sum()

    trace = []
    delta = np.inf
    iterations = 0
    obs_mask = G > 0
    for iterations in range(1, max_iter + 1):
        ratio = phi / seen_prob
        mix = U.T @ ratio @ U                     # P(observe (j1, j2))
        trace.append(float(np.sum(G[obs_mask] * np.log(mix[obs_mask]))))
        Y = np.where(obs_mask, G / np.where(mix > 0, mix, 1.0), 0.0)
        phi_new = (U @ Y @ U.T) / seen_prob * phi / gamma
        phi_new[0, 0] = 0.0
        phi_new /= phi_new.sum()
        delta = float(np.max(np.abs(phi_new - phi)))
        phi = phi_new
        if delta < tol:
            break
    converged = delta < tol
    if not converged:
        logger.warning("joint EM stopped at max_iter=%d with delta=%.3g", max_iter, delta)

    ratio = phi / seen_prob
    mix = U.T @ ratio @ U
    trace.append(float(np.sum(G[obs_mask] * np.log(mix[obs_mask]))))

    f_hat = gamma * phi / seen_prob
    f_hat[0, 0] = 0.0
    return JointPopulationEstimate(
        phi=phi,
        f_hat=f_hat,
        gamma=gamma,
        iterations=iterations,
        final_delta=delta,
        converged=converged,
        loglik=trace[-1],
        loglik_trace=np.asarray(trace),
    )


def reciprocity_from_joint(f_hat: np.ndarray) -> float:
    """Directed reciprocity implied by a pair-weight distribution.

    A pair with both directions nonzero contributes two bidirectional
    directed edges; a one-way pair contributes one edge.
    """
    both = float(f_hat[1:, 1:].sum())
    single = float(f_hat[0, 1:].sum() + f_hat[1:, 0].sum())
    edges = 2.0 * both + single
    if edges == 0:
        raise ValueError("no edges in pair distribution")
    return 2.0 * both / edges


def thin_joint(
    f2: dict[tuple[int, int], int], p: float, seed: int | np.random.Generator
) -> dict[tuple[int, int], int]:
    """Per-coordinate binomial thinning of a pair histogram (test oracle)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out: dict[tuple[int, int], int] = {}
    for (i1, i2), freq in f2.items():
        k1 = rng.binomial(i1, p, size=freq) if i1 > 0 else np.zeros(freq, dtype=np.int64)
        k2 = rng.binomial(i2, p, size=freq) if i2 > 0 else np.zeros(freq, dtype=np.int64)
        for a, b in zip(k1, k2):
            if a + b >= 1:
                key = (int(a), int(b))
                out[key] = out.get(key, 0) + 1
    return out
