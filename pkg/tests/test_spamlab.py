"""Max-flow features, the decision tree, and classification evaluation."""

import numpy as np
import pytest

from oracles import brute_min_cut

from retikit.graphs import WeightedDigraph
from retikit.spamlab.maxflow import (
    FeatureVector,
    bfs_distances,
    features_from_root,
    max_flow_unit,
)
from retikit.spamlab.tree import DecisionTree, _added_errors
from retikit.spamlab.evaluate import (
    _roc_points,
    connectivity_fraction,
    train_evaluate,
)
from retikit.synthgen import SpamGraphSpec


def digraph_from_pairs(n, pairs):
    g = WeightedDigraph(range(n))
    for u, v in pairs:
        g.add_edge(u, v)
    return g


class TestMaxFlow:
    def test_example_topology(self):
        # root connected to one node by three disjoint paths, to another by
        # a single longer path
        g = WeightedDigraph()
        for i in (1, 2, 3):
            g.add_edge("A", f"x{i}")
            g.add_edge(f"x{i}", "B")
        g.add_edge("x1", "y")
        g.add_edge("y", "S")
        assert max_flow_unit(g, g.index_of("A"), g.index_of("B")) == 3
        assert max_flow_unit(g, g.index_of("A"), g.index_of("S")) == 1

    def test_no_out_edges(self):
        g = digraph_from_pairs(3, [(1, 0), (2, 0)])
        assert max_flow_unit(g, 0, 1) == 0

    def test_same_node_rejected(self):
        g = digraph_from_pairs(2, [(0, 1)])
        with pytest.raises(ValueError):
            max_flow_unit(g, 0, 0)

    def test_matches_min_cut_on_random_graphs(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(2, 7))
            pairs = [
                (u, v) for u in range(n) for v in range(n)
                if u != v and rng.random() < 0.35
            ]
            g = digraph_from_pairs(n, pairs)
            flow = max_flow_unit(g, 0, 1)
            assert flow == brute_min_cut(g, 0, 1)


class TestFeatures:
    def test_direct_neighbor(self):
        g = digraph_from_pairs(3, [(0, 1), (1, 2)])
        feats = {f.node: f for f in features_from_root(g, 0)}
        assert feats[1].distance == 1
        assert feats[1].maxflow >= 1
        assert feats[2].distance == 2

    def test_unreachable_sentinel(self):
        g = digraph_from_pairs(3, [(0, 1), (2, 1)])
        feats = {f.node: f for f in features_from_root(g, 0)}
        assert feats[2].distance is None
        assert feats[2].maxflow == 0

    def test_flow_iff_reachable(self):
        rng = np.random.default_rng(2)
        g = digraph_from_pairs(
            40, [(u, v) for u in range(40) for v in range(40)
                 if u != v and rng.random() < 0.05]
        )
        for f in features_from_root(g, 0):
            assert (f.distance is not None) == (f.maxflow >= 1)

    def test_matches_per_pair_recomputation(self):
        rng = np.random.default_rng(3)
        g = digraph_from_pairs(
            60, [(u, v) for u in range(60) for v in range(60)
                 if u != v and rng.random() < 0.06]
        )
        feats = features_from_root(g, 5)
        dist = bfs_distances(g, 5)
        picks = rng.choice(len(feats), size=25, replace=False)
        for i in picks:
            f = feats[i]
            expected_d = None if dist[f.node] < 0 else int(dist[f.node])
            assert f.distance == expected_d
            if f.distance is not None:
                assert f.maxflow == max_flow_unit(g, 5, f.node)
            assert f.maxflow <= g.out_degree(5)
            assert f.maxflow <= g.in_degree(f.node)


class TestAddedErrors:
    def test_zero_error_case(self):
        # no observed errors still predicts some: N(1 - cf^(1/N))
        assert _added_errors(10, 0, 0.25) == pytest.approx(10 * (1 - 0.25**0.1))

    def test_monotone_in_confidence(self):
        assert _added_errors(50, 5, 0.10) > _added_errors(50, 5, 0.25)

    def test_saturated(self):
        assert _added_errors(10, 10, 0.25) == 0.0


class TestDecisionTree:
    def test_separable(self):
        X = np.array([[1.0, 8.0]] * 60 + [[7.0, 1.0]] * 60)
        y = np.array([0] * 60 + [1] * 60)
        tree = DecisionTree().fit(X, y)
        assert (tree.predict(X) == y).all()
        assert tree.n_leaves == 2

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            DecisionTree().fit(np.zeros((20, 2)), np.zeros(20, dtype=int))

    def test_pruning_shrinks_noise_trees(self):
        class Unpruned(DecisionTree):
            def _prune(self, node):
                return

        rng = np.random.default_rng(4)
        X = rng.random((400, 2))
        y = rng.integers(0, 2, size=400)
        pruned = DecisionTree().fit(X, y)
        grown = Unpruned().fit(X, y)
        assert pruned.n_leaves < 0.8 * grown.n_leaves

    def test_xor_structure_learned(self):
        rng = np.random.default_rng(5)
        X = rng.random((800, 2))
        y = ((X[:, 0] > 0.5) ^ (X[:, 1] > 0.5)).astype(int)
        tree = DecisionTree().fit(X, y)
        assert (tree.predict(X) == y).mean() > 0.95

    def test_probability_routing(self):
        X = np.vstack([np.zeros((30, 2)), np.ones((30, 2)), np.ones((10, 2)) * 0.4])
        y = np.concatenate([np.zeros(30), np.ones(30), np.array([0, 1] * 5)]).astype(int)
        tree = DecisionTree().fit(X, y)
        probs = tree.predict_proba(X)
        assert np.all((0 <= probs) & (probs <= 1))


class TestTrainEvaluate:
    @staticmethod
    def _features(n_benign, n_spam, rng, benign_gen, spam_gen):
        feats = []
        for i in range(n_benign):
            d, f = benign_gen(rng)
            feats.append(FeatureVector(node=i, distance=d, maxflow=f, label="benign"))
        for i in range(n_spam):
            d, f = spam_gen(rng)
            feats.append(
                FeatureVector(node=n_benign + i, distance=d, maxflow=f, label="spam")
            )
        return feats

    def test_perfect_separation(self):
        rng = np.random.default_rng(6)
        feats = self._features(
            400, 100, rng,
            lambda r: (int(r.integers(1, 4)), int(r.integers(2, 20))),
            lambda r: (None, 0),
        )
        res = train_evaluate(feats, folds=10, seed=1)
        assert res.tpr == 1.0
        assert res.fpr == 0.0

    def test_shuffled_labels_give_chance_rates(self):
        rng = np.random.default_rng(7)
        feats = self._features(
            5000, 5000, rng,
            lambda r: (int(r.integers(1, 6)), int(r.integers(0, 10))),
            lambda r: (int(r.integers(1, 6)), int(r.integers(0, 10))),
        )
        res = train_evaluate(feats, folds=10, seed=2)
        assert abs(res.tpr - res.fpr) < 0.05

    def test_single_class_rejected(self):
        rng = np.random.default_rng(8)
        feats = self._features(200, 0, rng, lambda r: (1, 3), lambda r: (1, 1))
        with pytest.raises(ValueError):
            train_evaluate(feats, folds=10)

    def test_distance_profile_operating_point(self):
        # distance-only features shaped like the observed removed/extant
        # profiles: the best single threshold sits near (tpr .75, fpr .25)
        rng = np.random.default_rng(9)
        benign_d = [1, 2, 3, 4, 5, 6]
        benign_w = [0.20, 0.20, 0.15, 0.20, 0.13, 0.12]
        spam_d = [2, 3, 4, 5, 6, 8]
        spam_w = [0.08, 0.10, 0.07, 0.30, 0.25, 0.20]
        feats = self._features(
            6000, 6000, rng,
            lambda r: (int(r.choice(benign_d, p=benign_w)), 1),
            lambda r: (int(r.choice(spam_d, p=spam_w)), 1),
        )
        res = train_evaluate(feats, folds=10, seed=3)
        fpr, tpr, _ = res.knee()
        assert tpr == pytest.approx(0.75, abs=0.05)
        assert fpr == pytest.approx(0.25, abs=0.05)

    def test_roc_monotone(self):
        rng = np.random.default_rng(10)
        y = rng.integers(0, 2, size=500)
        prob = np.clip(y * 0.3 + rng.random(500) * 0.7, 0, 1)
        points = _roc_points(y, prob)
        fprs = [p[0] for p in points]
        tprs = [p[1] for p in points]
        assert all(a <= b for a, b in zip(fprs, fprs[1:]))
        assert all(a <= b for a, b in zip(tprs, tprs[1:]))

    def test_fold_partition_exact(self):
        rng = np.random.default_rng(11)
        feats = self._features(
            300, 300, rng,
            lambda r: (int(r.integers(1, 4)), int(r.integers(3, 9))),
            lambda r: (int(r.integers(4, 9)), int(r.integers(0, 2))),
        )
        res = train_evaluate(feats, folds=10, seed=4)
        assert len(res.fold_rates) == 10


class TestConnectivity:
    def test_full_density(self):
        spec = SpamGraphSpec(n=6, spam_fraction=0.1, benign_density=1.0,
                             bs_rate=0.0, seed=1)
        assert connectivity_fraction(spec, pairs=200, seed=1) == 1.0

    def test_near_zero_density(self):
        spec = SpamGraphSpec(n=8, spam_fraction=0.1, benign_density=0.0005,
                             bs_rate=0.0, seed=2)
        assert connectivity_fraction(spec, pairs=200, seed=2) < 0.2

    def test_pair_floor(self):
        spec = SpamGraphSpec(n=6, benign_density=0.5, seed=3)
        with pytest.raises(ValueError):
            connectivity_fraction(spec, pairs=50)
