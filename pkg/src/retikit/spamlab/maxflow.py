"""Unit-capacity max flow and per-node connectivity features.

Max flow with unit capacities equals the number of edge-disjoint directed
paths, which is the connectivity signal: weakly attached nodes admit only
zero or one disjoint paths from a trusted root.  The augmenting-path search
is breadth-first (shortest augmenting path each round); with unit capacities
every augmentation is O(E) and flows stay small, so this is exact and fast
enough without a phase-based algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..graphs import WeightedDigraph

UNREACHABLE = -1


def _residual_arrays(g: WeightedDigraph):
    """Arc-pair residual structure: arc 2k is an edge, arc 2k+1 its reverse."""
    n = g.node_count
    src, dst, _ = g.edge_arrays()
    m = len(src)
    arc_from = np.empty(2 * m, dtype=np.int64)
    arc_to = np.empty(2 * m, dtype=np.int64)
    arc_from[0::2], arc_to[0::2] = src, dst
    arc_from[1::2], arc_to[1::2] = dst, src
    order = np.argsort(arc_from, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, arc_from + 1, 1)
    indptr = np.cumsum(indptr)
    arcs_sorted = order.astype(np.int64)
    cap0 = np.zeros(2 * m, dtype=np.int8)
    cap0[0::2] = 1
    return indptr, arcs_sorted, arc_to, cap0


@njit(cache=True)
def _flow_kernel(indptr, arcs, arc_to, cap0, source, targets):
    """Max flow source -> each target via BFS augmenting paths."""
    n = len(indptr) - 1
    flows = np.zeros(len(targets), dtype=np.int64)
    cap = cap0.copy()
    parent_arc = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for ti in range(len(targets)):
        t = targets[ti]
        if t == source:
            flows[ti] = 0
            continue
        cap[:] = cap0
        flow = 0
        while True:
            parent_arc[:] = -2
            parent_arc[source] = -1
            queue[0] = source
            head, tail = 0, 1
            found = False
            while head < tail and not found:
                u = queue[head]
                head += 1
                for k in range(indptr[u], indptr[u + 1]):
                    a = arcs[k]
                    if cap[a] <= 0:
                        continue
                    v = arc_to[a]
                    if parent_arc[v] != -2:
                        continue
                    parent_arc[v] = a
                    if v == t:
                        found = True
                        break
                    queue[tail] = v
                    tail += 1
            if not found:
                break
            v = t
            while v != source:
                a = parent_arc[v]
                cap[a] -= 1
                cap[a ^ 1] += 1
                v = arc_to[a ^ 1]
            flow += 1
        flows[ti] = flow
    return flows


def max_flow_unit(g: WeightedDigraph, s: int, t: int) -> int:
    """Edge-disjoint directed path count from node index s to t (exact)."""
    if s == t:
        raise ValueError("source and target must differ")
    indptr, arcs, arc_to, cap0 = _residual_arrays(g)
    return int(
        _flow_kernel(indptr, arcs, arc_to, cap0, np.int64(s),
                     np.array([t], dtype=np.int64))[0]
    )


def bfs_distances(g: WeightedDigraph, source: int) -> np.ndarray:
    """Directed hop distances from source; UNREACHABLE marks no path."""
    n = g.node_count
    indptr, indices = g.csr_out()
    dist = np.full(n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    queue = [source]
    while queue:
        nxt = []
        for u in queue:
            du = dist[u]
            for v in indices[indptr[u]:indptr[u + 1]]:
                if dist[v] == UNREACHABLE:
                    dist[v] = du + 1
                    nxt.append(int(v))
        queue = nxt
    return dist


@dataclass(frozen=True)
class FeatureVector:
    """Connectivity features of one node relative to the chosen root.

    distance is None when the node cannot be reached (and then maxflow is
    necessarily zero).
    """

    node: int
    distance: int | None
    maxflow: int
    label: str | None = None

    def distance_encoded(self, horizon: int) -> float:
        """Unreachable maps past the largest finite distance, keeping order."""
        return float(self.distance) if self.distance is not None else float(horizon)


def features_from_root(
    g: WeightedDigraph,
    root: int,
    targets=None,
    labels: dict[int, str] | None = None,
) -> list[FeatureVector]:
    """Distance and max-flow from ``root`` for every target node.

    One BFS serves all distances; each target pays one max-flow run.
    Unreachable targets get distance None and flow 0 without running the
    flow search.
    """
    if root < 0 or root >= g.node_count:
        raise ValueError("root not in graph")
    if targets is None:
        targets = [v for v in range(g.node_count) if v != root]
    dist = bfs_distances(g, root)
    reachable = [int(t) for t in targets if dist[t] != UNREACHABLE and t != root]
    indptr, arcs, arc_to, cap0 = _residual_arrays(g)
    flows = _flow_kernel(
        indptr, arcs, arc_to, cap0, np.int64(root),
        np.asarray(reachable, dtype=np.int64),
    )
    flow_of = dict(zip(reachable, flows))
    out = []
    for t in targets:
        t = int(t)
        if t == root:
            continue
        d = None if dist[t] == UNREACHABLE else int(dist[t])
        out.append(
            FeatureVector(
                node=t,
                distance=d,
                maxflow=int(flow_of.get(t, 0)),
                label=labels.get(t) if labels else None,
            )
        )
    return out
