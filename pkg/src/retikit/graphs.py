"""Directed graphs with positive integer edge weights.

Nodes are arbitrary hashable labels (usernames from ingestion, integers from
the generators); internally each node gets a dense index.  Self-loops are
dropped on insertion and parallel edges aggregate their weights, so the
structure is always a simple weighted digraph.
"""

from __future__ import annotations

import io
from typing import Hashable, Iterable, Iterator

import numpy as np


class WeightedDigraph:
    """Simple directed graph; edge (u, v) carries an integer weight >= 1."""

    def __init__(self, nodes: Iterable[Hashable] = ()):
        self._labels: list[Hashable] = []
        self._index: dict[Hashable, int] = {}
        self._out: list[dict[int, int]] = []
        self._in: list[dict[int, int]] = []
        self._edge_count = 0
        for node in nodes:
            self.add_node(node)

    # -- construction ----------------------------------------------------

    def add_node(self, label: Hashable) -> int:
        idx = self._index.get(label)
        if idx is None:
            idx = len(self._labels)
            self._index[label] = idx
            self._labels.append(label)
            self._out.append({})
            self._in.append({})
        return idx

    def add_edge(self, src: Hashable, dst: Hashable, weight: int = 1) -> None:
        """Add weight to edge src->dst; self-loops are silently dropped."""
        if weight < 1:
            raise ValueError("edge weight must be >= 1")
        u = self.add_node(src)
        v = self.add_node(dst)
        if u == v:
            return
        if v not in self._out[u]:
            self._edge_count += 1
        self._out[u][v] = self._out[u].get(v, 0) + int(weight)
        self._in[v][u] = self._in[v].get(u, 0) + int(weight)

    # -- queries -----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._labels)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def total_weight(self) -> int:
        return sum(sum(nbrs.values()) for nbrs in self._out)

    def labels(self) -> list[Hashable]:
        return list(self._labels)

    def label_of(self, idx: int) -> Hashable:
        return self._labels[idx]

    def index_of(self, label: Hashable) -> int:
        return self._index[label]

    def __contains__(self, label: Hashable) -> bool:
        return label in self._index

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out[u]

    def weight(self, u: int, v: int) -> int:
        return self._out[u].get(v, 0)

    def out_neighbors(self, u: int) -> list[int]:
        return sorted(self._out[u])

    def in_neighbors(self, v: int) -> list[int]:
        return sorted(self._in[v])

    def out_degree(self, u: int) -> int:
        return len(self._out[u])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (src_index, dst_index, weight), sorted."""
        for u in range(self.node_count):
            for v in sorted(self._out[u]):
                yield u, v, self._out[u][v]

    def out_degrees(self) -> np.ndarray:
        return np.array([len(d) for d in self._out], dtype=np.int64)

    def in_degrees(self) -> np.ndarray:
        return np.array([len(d) for d in self._in], dtype=np.int64)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(src, dst, weight) index arrays, edge order as in :meth:`edges`."""
        m = self.edge_count
        src = np.empty(m, dtype=np.int64)
        dst = np.empty(m, dtype=np.int64)
        wgt = np.empty(m, dtype=np.int64)
        for k, (u, v, w) in enumerate(self.edges()):
            src[k], dst[k], wgt[k] = u, v, w
        return src, dst, wgt

    def csr_out(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) CSR view of the out-adjacency, neighbors sorted."""
        n = self.node_count
        indptr = np.zeros(n + 1, dtype=np.int64)
        for u in range(n):
            indptr[u + 1] = indptr[u] + len(self._out[u])
        indices = np.empty(indptr[-1], dtype=np.int64)
        for u in range(n):
            nbrs = sorted(self._out[u])
            indices[indptr[u]:indptr[u + 1]] = nbrs
        return indptr, indices

    def merge(self, other: "WeightedDigraph") -> "WeightedDigraph":
        """Union by weight addition (shard-merge semantics)."""
        merged = WeightedDigraph(self._labels)
        for u, v, w in self.edges():
            merged.add_edge(self._labels[u], self._labels[v], w)
        for u, v, w in other.edges():
            merged.add_edge(other._labels[u], other._labels[v], w)
        for label in other._labels:
            merged.add_node(label)
        return merged

    # -- serialization -----------------------------------------------------

    def to_tsv(self) -> str:
        buf = io.StringIO()
        for u, v, w in self.edges():
            buf.write(f"{self._labels[u]}\t{self._labels[v]}\t{w}\n")
        return buf.getvalue()

    @classmethod
    def from_tsv(cls, text: str, int_labels: bool = False) -> "WeightedDigraph":
        g = cls()
        for line in text.splitlines():
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) == 2:
                src, dst, w = parts[0], parts[1], 1
            else:
                src, dst, w = parts[0], parts[1], int(parts[2])
            if int_labels:
                src, dst = int(src), int(dst)
            if src == dst:
                continue
            g.add_edge(src, dst, w)
        return g
