"""Cascade graph generation, degree expectations, and marginal fitting."""

import numpy as np
import pytest
from scipy import stats as sp_stats

from retikit.counts import CountHistogram
from retikit.netmetrics import degree_stats
from retikit.synthgen import (
    RmatParams,
    SpamGraphSpec,
    automat_fit,
    quadrants_from_marginals,
    rmat_degree_expectation,
    rmat_generate,
    spam_graph_generate,
)


class TestRmatParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            RmatParams(a=0.5, b=0.3, c=0.3, d=0.1, n=4, edges=10)
        with pytest.raises(ValueError):
            RmatParams(a=1.0, b=0.0, c=0.0, d=0.0, n=4, edges=10)

    def test_marginals(self):
        p = RmatParams(a=0.52, b=0.18, c=0.17, d=0.13, n=4, edges=10)
        assert p.p_out == pytest.approx(0.70)
        assert p.q_in == pytest.approx(0.69)


class TestGenerate:
    def test_single_edge(self):
        g = rmat_generate(RmatParams.retweet_preset(n=4, edges=1), seed=0)
        assert g.edge_count == 1
        assert g.node_count == 16

    def test_exact_edge_count_no_duplicates_no_loops(self):
        g = rmat_generate(RmatParams.retweet_preset(n=8, edges=2000), seed=1)
        assert g.edge_count == 2000
        seen = set()
        for u, v, w in g.edges():
            assert u != v
            assert w == 1
            assert (u, v) not in seen
            seen.add((u, v))

    def test_determinism(self):
        params = RmatParams.retweet_preset(n=8, edges=1500)
        a = rmat_generate(params, seed=9).to_tsv()
        b = rmat_generate(params, seed=9).to_tsv()
        assert a == b

    def test_capacity_guard(self):
        with pytest.raises(ValueError):
            rmat_generate(RmatParams.retweet_preset(n=2, edges=13), seed=0)

    def test_symmetric_cascade_is_uniform(self):
        # equal quadrant probabilities should be indistinguishable from
        # uniform random placement: chi-square on out-degree histogram
        params = RmatParams(a=0.25, b=0.25, c=0.25, d=0.25, n=9, edges=4096)
        g = rmat_generate(params, seed=3)
        k = g.out_degrees()
        # binomial expectation, merge tails
        n_nodes = params.node_count
        probs = sp_stats.binom.pmf(np.arange(0, 30), params.edges, 1.0 / n_nodes)
        observed = np.bincount(k, minlength=30)[:30].astype(float)
        observed[29] += (k >= 30).sum()
        expected = probs * n_nodes
        expected[29] = n_nodes - expected[:29].sum()
        keep = expected >= 5
        chi2 = float(((observed[keep] - expected[keep]) ** 2 / expected[keep]).sum())
        p = float(sp_stats.chi2.sf(chi2, keep.sum() - 1))
        assert p > 0.01


class TestDegreeExpectation:
    def test_zero_levels_single_node(self):
        params = RmatParams(a=0.52, b=0.18, c=0.17, d=0.13, n=0, edges=7)
        ck = rmat_degree_expectation(np.arange(0, 9), params)
        assert ck[7] == pytest.approx(1.0)
        assert ck.sum() == pytest.approx(1.0)

    def test_symmetric_collapses_to_single_binomial(self):
        params = RmatParams(a=0.25, b=0.25, c=0.25, d=0.25, n=6, edges=500)
        ks = np.arange(0, 501)
        ck = rmat_degree_expectation(ks, params)
        direct = 64 * sp_stats.binom.pmf(ks, 500, 1.0 / 64)
        assert np.allclose(ck, direct, atol=1e-9)

    def test_mass_and_mean_identities(self):
        params = RmatParams(a=0.35, b=0.35, c=0.2, d=0.1, n=10, edges=10_000)
        ks = np.arange(0, 10_001)
        ck = rmat_degree_expectation(ks, params)
        assert ck.sum() == pytest.approx(2**10, rel=1e-6)
        assert (ks * ck).sum() == pytest.approx(10_000, rel=1e-6)

    def test_generated_degrees_match_expectation(self):
        params = RmatParams(a=0.52, b=0.18, c=0.17, d=0.13, n=12, edges=8 * 4096)
        g = rmat_generate(params, seed=5)
        k_out = g.out_degrees()
        ck = rmat_degree_expectation(np.arange(0, int(k_out.max()) + 1), params)
        chi2, p = _log_binned_chi2(k_out, ck)
        assert p > 0.01


def _log_binned_chi2(degrees, expected_by_k, bins_per_decade=4):
    ks = np.arange(1, len(expected_by_k))
    edges = 10.0 ** (np.arange(0, np.ceil(bins_per_decade * np.log10(ks[-1])) + 1)
                     / bins_per_decade)
    edges = np.unique(np.floor(edges))
    idx = np.searchsorted(edges, ks, side="right") - 1
    expected = np.bincount(idx, weights=expected_by_k[1:], minlength=len(edges))
    observed = np.bincount(
        np.searchsorted(edges, degrees[degrees > 0], side="right") - 1,
        minlength=len(edges),
    ).astype(float)
    total_obs = observed.sum()
    expected = expected / expected.sum() * total_obs
    keep = expected >= 5
    obs_m, exp_m = observed[keep], expected[keep]
    chi2 = float(((obs_m - exp_m) ** 2 / exp_m).sum())
    p = float(sp_stats.chi2.sf(chi2, keep.sum() - 1))
    return chi2, p


class TestAutomatFit:
    def test_recovers_marginal(self):
        params = RmatParams(a=0.49, b=0.21, c=0.21, d=0.09, n=12, edges=8 * 4096)
        g = rmat_generate(params, seed=7)
        hist = CountHistogram.from_values(g.out_degrees()[g.out_degrees() > 0])
        p_hat = automat_fit(hist, 12, params.edges)
        assert p_hat == pytest.approx(0.70, abs=0.02)

    def test_uniform_histogram_flags_boundary(self, caplog):
        params = RmatParams(a=0.25, b=0.25, c=0.25, d=0.25, n=10, edges=8 * 1024)
        g = rmat_generate(params, seed=8)
        hist = CountHistogram.from_values(g.out_degrees()[g.out_degrees() > 0])
        with caplog.at_level("WARNING"):
            p_hat = automat_fit(hist, 10, params.edges)
        assert p_hat < 0.52
        assert "boundary" in caplog.text

    def test_quadrant_recovery_with_skew(self):
        a, b, c, d = quadrants_from_marginals(0.70, 0.69)
        assert a + b == pytest.approx(0.70)
        assert a + c == pytest.approx(0.69)
        assert a + b + c + d == pytest.approx(1.0)
        assert min(a, b, c, d) > 0
        assert a > 0.70 * 0.69  # skewed toward the dense corner

    def test_canonical_preset_exposed(self):
        params = RmatParams.retweet_preset(n=16, edges=16 * 65536)
        assert (params.a, params.b, params.c, params.d) == (0.52, 0.18, 0.17, 0.13)


class TestSpamGraph:
    def test_quadrant_budgets_exact(self):
        spec = SpamGraphSpec(n=10, benign_density=0.01, bs_rate=0.5, seed=1)
        sg = spam_graph_generate(spec)
        n_b, n_s = spec.benign_count, spec.spam_count
        assert sg.quadrant_edges["bb"] == round(0.01 * n_b * (n_b - 1))
        assert sg.quadrant_edges["ss"] == round(0.01 * n_s * (n_s - 1))
        assert sg.quadrant_edges["sb"] == round(0.01 * n_s * n_b)
        assert sg.quadrant_edges["bs"] == round(0.5 * n_s)
        assert sg.graph.edge_count == sum(sg.quadrant_edges.values())

    def test_quadrant_containment(self):
        spec = SpamGraphSpec(n=9, benign_density=0.02, bs_rate=0.3, seed=2)
        sg = spam_graph_generate(spec)
        n_b = spec.benign_count
        tallies = {"bb": 0, "bs": 0, "sb": 0, "ss": 0}
        for u, v, _ in sg.graph.edges():
            key = ("b" if u < n_b else "s") + ("b" if v < n_b else "s")
            tallies[key] += 1
        assert tallies == sg.quadrant_edges

    def test_no_bs_edges_means_unreachable_spam(self):
        spec = SpamGraphSpec(n=8, benign_density=0.05, bs_rate=0.0, seed=3)
        sg = spam_graph_generate(spec)
        from retikit.spamlab.maxflow import bfs_distances, UNREACHABLE

        n_b = spec.benign_count
        for root in range(0, n_b, 40):
            dist = bfs_distances(sg.graph, root)
            assert np.all(dist[n_b:] == UNREACHABLE)

    def test_zero_spam_fraction_plain_graph(self):
        spec = SpamGraphSpec(n=8, spam_fraction=0.0, benign_density=0.02,
                             bs_rate=0.0, seed=4)
        sg = spam_graph_generate(spec)
        assert spec.spam_count == 0
        assert all(lab == "benign" for lab in sg.labels.values())
        assert sg.graph.edge_count == round(0.02 * 256 * 255)

    def test_determinism(self):
        spec = SpamGraphSpec(n=8, benign_density=0.03, bs_rate=0.2, seed=5)
        a = spam_graph_generate(spec).graph.to_tsv()
        b = spam_graph_generate(spec).graph.to_tsv()
        assert a == b
