"""Undirected graphs in compressed sparse row form, plus structural statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InputError

# Local clustering histogram edges: {0}, (0, 0.1], (0.1, 0.2], ..., (0.9, 1.0].
CLUSTERING_BUCKETS = ["0"] + [f"({i / 10:.1f},{(i + 1) / 10:.1f}]" for i in range(10)]


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected graph.

    ``offsets`` has length ``n + 1``; the neighbors of ``v`` are
    ``neighbors[offsets[v]:offsets[v + 1]]``, sorted ascending. Every edge
    is stored once in each endpoint's list, so ``len(neighbors) == 2 * m``.
    """

    n: int
    offsets: np.ndarray
    neighbors: np.ndarray

    @property
    def m(self) -> int:
        return len(self.neighbors) // 2

    def adj(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def edges(self) -> np.ndarray:
        """Each undirected edge once, as ``(u, v)`` rows with ``u < v``."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        keep = src < self.neighbors
        return np.column_stack([src[keep], self.neighbors[keep]])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.neighbors, other.neighbors)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(edges, n: int) -> Graph:
    """Build a :class:`Graph` from vertex pairs.

    Self-loops are dropped and ``(u, v)``/``(v, u)``/repeated pairs collapse
    into one undirected edge.
    """
    n = int(n)
    if n < 0:
        raise InputError(f"vertex count must be nonnegative, got {n}")
    e = np.asarray(edges, dtype=np.int64)
    if e.size == 0:
        e = e.reshape(0, 2)
    if e.ndim != 2 or e.shape[1] != 2:
        raise InputError("edges must be a sequence of vertex pairs")
    bad = np.flatnonzero(((e < 0) | (e >= n)).any(axis=1))
    if len(bad):
        u, v = e[bad[0]]
        raise InputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")

    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    keep = lo != hi
    key = np.unique(lo[keep] * n + hi[keep])
    lo, hi = key // n, key % n

    # both directions, sorted by (source, target)
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.argsort(src * n + dst, kind="stable")
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
    return Graph(n, _frozen(offsets), _frozen(dst[order]))


def from_csr(offsets, neighbors) -> Graph:
    """Wrap existing CSR arrays after checking the graph invariants."""
    offsets = np.asarray(offsets, dtype=np.int64)
    neighbors = np.asarray(neighbors, dtype=np.int64)
    n = len(offsets) - 1
    if n < 0 or offsets[0] != 0 or offsets[-1] != len(neighbors):
        raise InputError("offsets must start at 0 and end at len(neighbors)")
    if np.any(np.diff(offsets) < 0):
        raise InputError("offsets must be nondecreasing")
    if len(neighbors) % 2:
        raise InputError("neighbor array length must be even")
    if len(neighbors) and (neighbors.min() < 0 or neighbors.max() >= n):
        raise InputError("neighbor id out of range")
    g = Graph(n, _frozen(offsets), _frozen(neighbors))
    if g != build_graph(g.edges(), n) or len(g.edges()) != g.m:
        raise InputError("CSR arrays are not a sorted, symmetric, simple graph")
    return g


@dataclass(frozen=True)
class DegreeStats:
    avg_degree: float
    max_degree: int
    variance: float
    isolated_pct: float


def degree_stats(g: Graph) -> DegreeStats:
    """Average (2m/n), maximum, population variance and % isolated.

    An empty graph reports all zeros.
    """
    if g.n == 0:
        return DegreeStats(0.0, 0, 0.0, 0.0)
    deg = g.degrees()
    return DegreeStats(
        avg_degree=2 * g.m / g.n,
        max_degree=int(deg.max()),
        variance=float(np.var(deg)),
        isolated_pct=100.0 * np.count_nonzero(deg == 0) / g.n,
    )


def local_clustering(g: Graph, v: int) -> float:
    """Fraction of neighbor pairs of ``v`` that are adjacent; 0 if d(v) < 2."""
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} outside [0, {g.n})")
    nbrs = g.adj(v)
    d = len(nbrs)
    if d < 2:
        return 0.0
    links = 0
    for u in nbrs:
        au = g.adj(u)
        # sorted lists: membership by binary search
        pos = np.searchsorted(au, nbrs)
        pos[pos == len(au)] = 0
        links += np.count_nonzero(au[pos] == nbrs) if len(au) else 0
    return (links / 2) / (d * (d - 1) / 2)


@njit(cache=True)
def _triangles_per_vertex(offsets, neighbors):
    n = len(offsets) - 1
    deg = offsets[1:] - offsets[:-1]
    # orient each edge from lower to higher (degree, id) rank
    out_off = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        cnt = 0
        for k in range(offsets[v], offsets[v + 1]):
            w = neighbors[k]
            if deg[w] > deg[v] or (deg[w] == deg[v] and w > v):
                cnt += 1
        out_off[v + 1] = out_off[v] + cnt
    out = np.empty(out_off[n], dtype=np.int64)
    for v in range(n):
        p = out_off[v]
        for k in range(offsets[v], offsets[v + 1]):
            w = neighbors[k]
            if deg[w] > deg[v] or (deg[w] == deg[v] and w > v):
                out[p] = w
                p += 1
    tri = np.zeros(n, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        for k in range(out_off[v], out_off[v + 1]):
            mark[out[k]] = v
        for k in range(out_off[v], out_off[v + 1]):
            u = out[k]
            for j in range(out_off[u], out_off[u + 1]):
                w = out[j]
                if mark[w] == v:
                    tri[v] += 1
                    tri[u] += 1
                    tri[w] += 1
    return tri


def triangle_counts(g: Graph) -> np.ndarray:
    """Number of triangles through each vertex."""
    return _triangles_per_vertex(g.offsets, g.neighbors)


def clustering_coefficients(g: Graph) -> np.ndarray:
    """Local clustering coefficient of every vertex."""
    tri = triangle_counts(g).astype(np.float64)
    deg = g.degrees().astype(np.float64)
    pairs = deg * (deg - 1) / 2
    out = np.zeros(g.n)
    np.divide(tri, pairs, out=out, where=pairs > 0)
    return out


def average_clustering(g: Graph) -> float:
    if g.n == 0:
        raise InputError("average clustering is undefined for an empty graph")
    return float(clustering_coefficients(g).mean())


@dataclass(frozen=True)
class ClusteringReport:
    per_vertex: np.ndarray
    average: float
    histogram: dict


def clustering_histogram(coeffs) -> dict:
    """Count coefficients per bucket of :data:`CLUSTERING_BUCKETS`."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    counts = dict.fromkeys(CLUSTERING_BUCKETS, 0)
    counts["0"] = int(np.count_nonzero(coeffs == 0))
    pos = coeffs[coeffs > 0]
    # bucket i holds (i/10, (i+1)/10]; the small epsilon keeps 0.1 in bucket 0
    idx = np.clip(np.ceil(pos * 10 - 1e-9).astype(np.int64) - 1, 0, 9)
    for i, c in enumerate(np.bincount(idx, minlength=10)):
        counts[CLUSTERING_BUCKETS[i + 1]] = int(c)
    return counts


def clustering_report(g: Graph) -> ClusteringReport:
    """Per-vertex coefficients, their mean (0 for an empty graph) and histogram."""
    cc = clustering_coefficients(g)
    avg = float(cc.mean()) if g.n else 0.0
    return ClusteringReport(cc, avg, clustering_histogram(cc))


def label_permutation(n: int, seed: int) -> np.ndarray:
    """``perm[v]`` is the new label of vertex ``v`` (seeded Fisher-Yates)."""
    return np.random.Generator(np.random.PCG64(seed)).permutation(n)


def relabel(g: Graph, perm) -> Graph:
    perm = np.asarray(perm, dtype=np.int64)
    if len(perm) != g.n or not np.array_equal(np.sort(perm), np.arange(g.n)):
        raise InputError("relabeling must be a permutation of the vertices")
    return build_graph(perm[g.edges()], g.n)


def shuffle_labels(g: Graph, seed: int) -> Graph:
    """Apply a uniformly random, seed-determined relabeling of the vertices."""
    return relabel(g, label_permutation(g.n, seed))
