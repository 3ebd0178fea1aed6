"""Small C4.5-style decision tree for two-class numeric features.

Binary splits on numeric attributes chosen by information gain ratio (with
the classic guard that a candidate must reach at least the average gain),
minimum two instances per leaf, and pessimistic error-based pruning using
the upper confidence bound of the binomial error at confidence 0.25.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

DEFAULT_CONFIDENCE = 0.25
MIN_LEAF = 2


def _entropy(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts[counts > 0] / n
    return float(-(p * np.log2(p)).sum())


def _added_errors(n: float, e: float, cf: float = DEFAULT_CONFIDENCE) -> float:
    """Extra errors predicted by the binomial upper confidence bound."""
    if n == 0:
        return 0.0
    if e < 1:
        base = n * (1.0 - cf ** (1.0 / n))
        if e == 0:
            return base
        return base + e * (_added_errors(n, 1.0, cf) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = float(special.ndtri(1.0 - cf))
    f = (e + 0.5) / n
    r = (f + z * z / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (
        1.0 + z * z / n
    )
    return r * n - e


@dataclass
class _Node:
    counts: np.ndarray                      # class counts reaching this node
    feature: int | None = None
    threshold: float | None = None
    left: "_Node | None" = None
    right: "_Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def leaf_error(self) -> float:
        return float(self.counts.sum() - self.counts.max())

    def estimated_errors(self) -> float:
        if self.is_leaf:
            e = self.leaf_error()
            return e + _added_errors(float(self.counts.sum()), e)
        return self.left.estimated_errors() + self.right.estimated_errors()

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def leaves(self) -> int:
        if self.is_leaf:
            return 1
        return self.left.leaves() + self.right.leaves()


@dataclass
class DecisionTree:
    """Two-class tree over numeric features; class 1 is the positive class."""

    confidence: float = DEFAULT_CONFIDENCE
    min_leaf: int = MIN_LEAF
    max_depth: int = 25
    root: _Node | None = field(default=None, repr=False)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTree":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or len(X) != len(y):
            raise ValueError("X must be (n, d) with matching labels")
        if len(np.unique(y)) < 2:
            raise ValueError("training data contains a single class")
        self.root = self._grow(X, y, depth=0)
        self._prune(self.root)
        return self

    # -- growing -----------------------------------------------------------

    def _grow(self, X: np.ndarray, y: np.ndarray, depth: int) -> _Node:
        counts = np.bincount(y, minlength=2).astype(np.float64)
        node = _Node(counts=counts)
        if counts.min() == 0 or len(y) < 2 * self.min_leaf or depth >= self.max_depth:
            return node
        split = self._best_split(X, y, counts)
        if split is None:
            return node
        feature, threshold = split
        mask = X[:, feature] <= threshold
        node.feature = feature
        node.threshold = threshold
        node.left = self._grow(X[mask], y[mask], depth + 1)
        node.right = self._grow(X[~mask], y[~mask], depth + 1)
        return node

    def _best_split(self, X, y, counts) -> tuple[int, float] | None:
        n = len(y)
        base_entropy = _entropy(counts)
        candidates = []
        for f in range(X.shape[1]):
            order = np.argsort(X[:, f], kind="stable")
            xs, ys = X[order, f], y[order]
            boundary = np.nonzero(np.diff(xs) > 0)[0]
            if boundary.size == 0:
                continue
            left_pos = np.cumsum(ys)[boundary].astype(np.float64)
            left_n = (boundary + 1).astype(np.float64)
            right_n = n - left_n
            ok = (left_n >= self.min_leaf) & (right_n >= self.min_leaf)
            if not ok.any():
                continue
            total_pos = counts[1]
            right_pos = total_pos - left_pos
            h_left = _binary_entropy(left_pos / left_n)
            h_right = _binary_entropy(right_pos / right_n)
            gain = base_entropy - (left_n * h_left + right_n * h_right) / n
            frac = left_n / n
            split_info = _binary_entropy(frac)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(split_info > 1e-12, gain / split_info, 0.0)
            gain[~ok] = -np.inf
            best = int(np.argmax(gain + 1e-9 * ratio))
            if not np.isfinite(gain[best]) or gain[best] <= 1e-12:
                continue
            thr = 0.5 * (xs[boundary[best]] + xs[boundary[best] + 1])
            candidates.append((float(gain[best]), float(ratio[best]), f, thr))
        if not candidates:
            return None
        avg_gain = sum(c[0] for c in candidates) / len(candidates)
        eligible = [c for c in candidates if c[0] >= avg_gain - 1e-12]
        _, _, feature, threshold = max(eligible, key=lambda c: (c[1], -c[2]))
        return feature, threshold

    # -- pruning -----------------------------------------------------------

    def _prune(self, node: _Node) -> None:
        if node.is_leaf:
            return
        self._prune(node.left)
        self._prune(node.right)
        e_leaf = node.leaf_error()
        as_leaf = e_leaf + _added_errors(float(node.counts.sum()), e_leaf, self.confidence)
        as_tree = node.left.estimated_errors() + node.right.estimated_errors()
        if as_leaf <= as_tree + 0.1:
            node.feature = None
            node.threshold = None
            node.left = None
            node.right = None

    # -- prediction ----------------------------------------------------------

    def _leaf_for(self, x: np.ndarray) -> _Node:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """P(class 1) per row, from leaf relative frequencies."""
        if self.root is None:
            raise RuntimeError("tree is not fitted")
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(len(X))
        for i, x in enumerate(X):
            leaf = self._leaf_for(x)
            out[i] = leaf.counts[1] / leaf.counts.sum()
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(np.int64)

    @property
    def depth(self) -> int:
        return self.root.depth() if self.root else 0

    @property
    def n_leaves(self) -> int:
        return self.root.leaves() if self.root else 0


def _binary_entropy(p: np.ndarray) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=np.float64), 0.0, 1.0)
    out = np.zeros_like(p)
    inner = (p > 0) & (p < 1)
    q = p[inner]
    out[inner] = -(q * np.log2(q) + (1 - q) * np.log2(1 - q))
    return out
