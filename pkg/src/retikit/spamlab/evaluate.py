"""Cross-validated spam classification, connectivity curves, and sweeps."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..seeds import derive_rng
from ..synthgen import BENIGN, SPAM, SpamGraphSpec, spam_graph_generate
from .maxflow import FeatureVector, bfs_distances, features_from_root, UNREACHABLE
from .tree import DecisionTree

logger = logging.getLogger(__name__)

POSITIVE = SPAM  # true/false positive semantics are spam-as-positive


@dataclass
class EvaluationResult:
    model: DecisionTree
    tpr: float
    fpr: float
    roc: list[tuple[float, float, float]]  # (fpr, tpr, threshold)
    fold_rates: list[tuple[float, float]] = field(repr=False, default_factory=list)

    def knee(self) -> tuple[float, float, float]:
        """ROC point maximizing tpr - fpr; ties broken toward lower fpr."""
        return max(self.roc, key=lambda p: (p[1] - p[0], -p[0]))


def _encode(features: list[FeatureVector]) -> tuple[np.ndarray, np.ndarray]:
    """(distance, maxflow) matrix plus 0/1 labels, spam = 1.

    Unreachable distances encode as one past the largest finite distance so
    the split search never sees an infinity but ordering is preserved.
    """
    finite = [f.distance for f in features if f.distance is not None]
    horizon = (max(finite) + 1) if finite else 1
    X = np.array(
        [[f.distance_encoded(horizon), f.maxflow] for f in features], dtype=np.float64
    )
    y = np.array([1 if f.label == POSITIVE else 0 for f in features], dtype=np.int64)
    return X, y


def train_evaluate(
    features: list[FeatureVector],
    folds: int = 10,
    seed: int = 0,
) -> EvaluationResult:
    """Cross-validated decision tree over (distance, maxflow).

    Reported tpr/fpr are means of per-fold rates from hard predictions; the
    ROC pools out-of-fold leaf probabilities across all folds and sweeps a
    threshold over them.  The returned model is refit on all rows.
    """
    labels = {f.label for f in features}
    if len(labels - {None}) < 2:
        raise ValueError("need both classes present to train")
    if len(features) < 10 * folds:
        raise ValueError(f"need at least {10 * folds} rows for {folds}-fold CV")
    X, y = _encode(features)
    rng = derive_rng(seed, "cv-folds")
    perm = rng.permutation(len(y))

    pooled = np.full(len(y), np.nan)
    fold_rates = []
    for k in range(folds):
        test_idx = perm[k::folds]
        train_mask = np.ones(len(y), dtype=bool)
        train_mask[test_idx] = False
        if len(np.unique(y[train_mask])) < 2:
            logger.warning("fold %d lost a class; skipping", k)
            continue
        tree = DecisionTree().fit(X[train_mask], y[train_mask])
        prob = tree.predict_proba(X[test_idx])
        pooled[test_idx] = prob
        pred = (prob > 0.5).astype(np.int64)
        fold_rates.append(_rates(y[test_idx], pred))

    if not fold_rates:
        raise ValueError("every fold lost a class; cannot cross-validate")
    tprs, fprs = zip(*fold_rates)
    roc = _roc_points(y[~np.isnan(pooled)], pooled[~np.isnan(pooled)])
    model = DecisionTree().fit(X, y)
    return EvaluationResult(
        model=model,
        tpr=float(np.mean(tprs)),
        fpr=float(np.mean(fprs)),
        roc=roc,
        fold_rates=fold_rates,
    )


def _rates(y_true: np.ndarray, y_pred: np.ndarray) -> tuple[float, float]:
    pos = y_true == 1
    neg = ~pos
    tpr = float(y_pred[pos].sum() / pos.sum()) if pos.any() else float("nan")
    fpr = float(y_pred[neg].sum() / neg.sum()) if neg.any() else float("nan")
    return tpr, fpr


def _roc_points(y: np.ndarray, prob: np.ndarray) -> list[tuple[float, float, float]]:
    """(fpr, tpr, threshold) per distinct threshold, ascending in fpr."""
    thresholds = np.unique(prob)[::-1]
    n_pos = (y == 1).sum()
    n_neg = (y == 0).sum()
    points = [(0.0, 0.0, float("inf"))]
    for th in thresholds:
        pred = prob >= th
        tp = int((pred & (y == 1)).sum())
        fp = int((pred & (y == 0)).sum())
        points.append((fp / n_neg, tp / n_pos, float(th)))
    points.sort(key=lambda p: (p[0], p[1]))
    return points


# ---------------------------------------------------------------------------
# Connectivity and parameter sweeps
# ---------------------------------------------------------------------------


def connectivity_fraction(
    spec: SpamGraphSpec, pairs: int = 1000, seed: int = 0
) -> float:
    """Fraction of random ordered benign pairs joined by a directed path."""
    if pairs < 100:
        raise ValueError("use at least 100 pairs")
    sg = spam_graph_generate(spec)
    benign = np.arange(spec.benign_count)
    rng = derive_rng(seed, "connectivity-pairs")
    sources = rng.choice(benign, size=pairs)
    targets = rng.choice(benign, size=pairs)
    redraw = sources == targets
    while redraw.any():
        targets[redraw] = rng.choice(benign, size=int(redraw.sum()))
        redraw = sources == targets
    reach_cache: dict[int, np.ndarray] = {}
    connected = 0
    for s, t in zip(sources, targets):
        dist = reach_cache.get(int(s))
        if dist is None:
            dist = bfs_distances(sg.graph, int(s))
            reach_cache[int(s)] = dist
        if dist[t] != UNREACHABLE:
            connected += 1
    return connected / pairs


def pick_root(sg, seed: int = 0) -> int:
    """Uniform benign node, redrawn until it has outgoing edges."""
    rng = derive_rng(seed, "root-choice")
    benign = [n for n, lab in sg.labels.items() if lab == BENIGN]
    for _ in range(10 * len(benign)):
        root = int(rng.choice(benign))
        if sg.graph.out_degree(root) > 0:
            return root
    raise RuntimeError("no benign node has outgoing edges")


@dataclass
class SweepResult:
    benign_density: float
    bs_rate: float
    tpr: float
    fpr: float
    threshold: float
    n_nodes: int
    seed: int
    roc: list[tuple[float, float, float]] = field(repr=False, default_factory=list)


def sweep(
    densities: list[float],
    bs_rates: list[float],
    n: int = 13,
    seed: int = 0,
    spam_fraction: float = 0.10,
    folds: int = 10,
    threads: int = 1,
) -> list[SweepResult]:
    """Classification performance over a (density, bs_rate) grid.

    Each cell: generate a labeled graph, root at a random active benign
    node, extract features for every other node, cross-validate the tree,
    and report the ROC knee.  Cells carry independent derived seeds, so the
    result list is identical whatever the thread count.  Degenerate cells
    (a lost class, an empty graph) are skipped with a log record.
    """
    specs = []
    for di, density in enumerate(densities):
        for bi, bs_rate in enumerate(bs_rates):
            specs.append(
                SpamGraphSpec(
                    n=n,
                    spam_fraction=spam_fraction,
                    benign_density=density,
                    bs_rate=bs_rate,
                    seed=seed + 1000 * di + bi,
                )
            )

    def run_cell(spec):
        try:
            return sweep_cell(spec, folds=folds)
        except (ValueError, RuntimeError) as exc:
            logger.warning(
                "skipping cell density=%g bs_rate=%g: %s",
                spec.benign_density, spec.bs_rate, exc,
            )
            return None

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            evaluations = list(pool.map(run_cell, specs))
    else:
        evaluations = [run_cell(spec) for spec in specs]

    results = []
    for spec, result in zip(specs, evaluations):
        if result is None:
            continue
        fpr, tpr, threshold = result.knee()
        results.append(
            SweepResult(
                benign_density=spec.benign_density,
                bs_rate=spec.bs_rate,
                tpr=tpr,
                fpr=fpr,
                threshold=threshold,
                n_nodes=spec.node_count,
                seed=spec.seed,
                roc=result.roc,
            )
        )
    return results


def sweep_cell(spec: SpamGraphSpec, folds: int = 10) -> EvaluationResult:
    """One sweep cell: graph, root, features, cross-validated evaluation."""
    sg = spam_graph_generate(spec)
    root = pick_root(sg, seed=spec.seed)
    feats = features_from_root(sg.graph, root, labels=sg.labels)
    return train_evaluate(feats, folds=folds, seed=spec.seed)
