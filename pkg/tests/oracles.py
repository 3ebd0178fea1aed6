"""Brute-force reference implementations used as test oracles.

Everything here computes straight from definitions with no shared code
paths into the package: triple loops, Floyd-Warshall, statistics-module
arithmetic, and exhaustive cut enumeration.
"""

import itertools
import math
import statistics

import numpy as np


def random_digraph(rng, n, p):
    from retikit.graphs import WeightedDigraph

    g = WeightedDigraph(range(n))
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                g.add_edge(u, v)
    return g


def brute_assortativity(g):
    k_in = [g.in_degree(v) for v in range(g.node_count)]
    k_out = [g.out_degree(v) for v in range(g.node_count)]
    edges = [(u, v) for u, v, _ in g.edges()]
    out = {}
    for a, deg_a in (("in", k_in), ("out", k_out)):
        for b, deg_b in (("in", k_in), ("out", k_out)):
            xs = [deg_a[u] for u, _ in edges]
            ys = [deg_b[v] for _, v in edges]
            mx, my = statistics.fmean(xs), statistics.fmean(ys)
            vx = statistics.fmean([(x - mx) ** 2 for x in xs])
            vy = statistics.fmean([(y - my) ** 2 for y in ys])
            if vx == 0 or vy == 0:
                out[(a, b)] = None
            else:
                cov = statistics.fmean([(x - mx) * (y - my) for x, y in zip(xs, ys)])
                out[(a, b)] = cov / math.sqrt(vx * vy)
    return out


def brute_clustering(g):
    n = g.node_count
    adj = [[g.has_edge(u, v) for v in range(n)] for u in range(n)]
    counts = {k: [0, 0] for k in ("cycle", "middleman", "in", "out")}  # [total, closed]
    for i in range(n):
        for u in range(n):
            for w in range(n):
                if u == i or w == i or u == w:
                    continue
                if adj[u][i] and adj[i][w]:  # two-edge path u -> i -> w
                    counts["cycle"][0] += 1
                    counts["cycle"][1] += adj[w][u]
                    counts["middleman"][0] += 1
                    counts["middleman"][1] += adj[u][w]
                if adj[u][i] and adj[w][i]:  # both point at i
                    counts["in"][0] += 1
                    counts["in"][1] += adj[u][w]
                if adj[i][u] and adj[i][w]:  # i points at both
                    counts["out"][0] += 1
                    counts["out"][1] += adj[u][w]
    coeffs = {
        k: (closed / total if total else None) for k, (total, closed) in counts.items()
    }
    return coeffs, counts


def brute_reciprocity(g):
    edges = {(u, v) for u, v, _ in g.edges()}
    mutual = sum(1 for u, v in edges if (v, u) in edges)
    return mutual / len(edges)


def brute_paths(g):
    n = g.node_count
    INF = float("inf")
    dist = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, _ in g.edges():
        dist[u][v] = 1
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik == INF:
                continue
            row_k = dist[k]
            row_i = dist[i]
            for j in range(n):
                alt = dik + row_k[j]
                if alt < row_i[j]:
                    row_i[j] = alt
    hist = {}
    unreachable = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if dist[i][j] == INF:
                unreachable += 1
            else:
                hist[int(dist[i][j])] = hist.get(int(dist[i][j]), 0) + 1
    return hist, unreachable


def brute_min_cut(g, s, t):
    """Menger dual: fewest edges whose removal separates s from t."""
    others = [v for v in range(g.node_count) if v not in (s, t)]
    edges = [(u, v) for u, v, _ in g.edges()]
    best = None
    for r in range(len(others) + 1):
        for comb in itertools.combinations(others, r):
            side = {s} | set(comb)
            cut = sum(1 for u, v in edges if u in side and v not in side)
            best = cut if best is None else min(best, cut)
    return best


# -- exhaustive edge-disjoint path oracle over all 5-node digraphs ----------

K5_EDGES = [(u, v) for u in range(5) for v in range(5) if u != v]
EDGE_INDEX = {e: i for i, e in enumerate(K5_EDGES)}


def simple_path_masks():
    """Every simple 0 -> 1 path in the complete 5-node digraph, as edge masks."""
    masks = []
    for r in range(4):
        for mids in itertools.permutations((2, 3, 4), r):
            nodes = (0, *mids, 1)
            mask = 0
            for a, b in zip(nodes, nodes[1:]):
                mask |= 1 << EDGE_INDEX[(a, b)]
            masks.append(mask)
    return np.array(masks, dtype=np.int64)


def exhaustive_flow_table():
    """Edge-disjoint 0 -> 1 path count for every 5-node edge subset.

    Bottom-up: the best packing for an edge set is one path plus the best
    packing of the set with that path's edges removed, maximized over all
    simple paths it contains.  This enumerates every edge-disjoint path
    family implicitly but exactly.
    """
    from numba import njit

    masks = simple_path_masks()

    @njit(cache=True)
    def _dp(path_masks):
        table = np.zeros(1 << 20, dtype=np.int8)
        for mask in range(1, 1 << 20):
            best = 0
            for p in path_masks:
                if mask & p == p:
                    v = table[mask & ~p] + 1
                    if v > best:
                        best = v
            table[mask] = best
        return table

    return _dp(masks)
