"""R-MAT synthetic graphs.

Each edge descends ``scale`` levels of the adjacency matrix, picking the
quadrant (1,1), (1,2), (2,1) or (2,2) with probability a, b, c or d; the
first choice decides the most significant row/column bits.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError
from .graph import Graph, build_graph

PRESETS = {
    "ER": (0.25, 0.25, 0.25, 0.25),
    "G": (0.45, 0.15, 0.15, 0.25),
    "B": (0.55, 0.15, 0.15, 0.15),
}

# edges drawn per independent Philox counter block
BLOCK_EDGES = 1 << 18


@dataclass(frozen=True)
class RmatParams:
    a: float
    b: float
    c: float
    d: float
    scale: int
    edge_factor: int = 8
    seed: int = 0

    def __post_init__(self):
        probs = (self.a, self.b, self.c, self.d)
        if min(probs) < 0:
            raise InputError(f"quadrant probabilities must be nonnegative: {probs}")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise InputError(f"quadrant probabilities must sum to 1: {probs}")
        if self.scale < 1:
            raise InputError(f"scale must be >= 1, got {self.scale}")
        if self.edge_factor < 1:
            raise InputError(f"edge factor must be >= 1, got {self.edge_factor}")
        if self.seed < 0:
            raise InputError(f"seed must be nonnegative, got {self.seed}")

    @property
    def n(self) -> int:
        return 1 << self.scale

    @property
    def num_samples(self) -> int:
        return self.edge_factor << self.scale

    @property
    def thresholds(self):
        return np.cumsum([self.a, self.b, self.c])


def preset(name: str, scale: int = 1, edge_factor: int = 8, seed: int = 0) -> RmatParams:
    """Parameters for ``ER``, ``G`` or ``B`` (case-insensitive)."""
    key = str(name).upper()
    if key not in PRESETS:
        raise InputError(f"unknown R-MAT preset {name!r}; choose from ER, G, B")
    return RmatParams(*PRESETS[key], scale=scale, edge_factor=edge_factor, seed=seed)


def _quadrant(u, thresholds):
    # 0 -> (1,1), 1 -> (1,2), 2 -> (2,1), 3 -> (2,2)
    return np.searchsorted(thresholds, u, side="right")


def sample_edge(p: RmatParams, draws):
    """Place one edge using ``p.scale`` uniform variates from ``draws``."""
    it = iter(draws)
    t = p.thresholds
    row = col = 0
    for _ in range(p.scale):
        q = int(_quadrant(next(it), t))
        row = (row << 1) | (q >> 1)
        col = (col << 1) | (q & 1)
    return row, col


def _block_rng(seed, block):
    # disjoint counter ranges per block, independent of worker count
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, block, 0]))


def block_variates(p: RmatParams, block: int, count: int) -> np.ndarray:
    """Variates for ``count`` edges of ``block``, shape ``(scale, count)``.

    Column ``e`` is the draw stream :func:`sample_edge` consumes for that edge.
    """
    return _block_rng(p.seed, block).random((p.scale, count))


def _sample_block(p: RmatParams, block: int, count: int) -> np.ndarray:
    u = block_variates(p, block, count)
    q = _quadrant(u, p.thresholds)
    row = np.zeros(count, dtype=np.int64)
    col = np.zeros(count, dtype=np.int64)
    for level in range(p.scale):
        row = (row << 1) | (q[level] >> 1)
        col = (col << 1) | (q[level] & 1)
    return np.column_stack([row, col])


def sample_edges(p: RmatParams, workers: int = 1) -> np.ndarray:
    """All ``edge_factor * 2**scale`` candidate edges, before cleanup."""
    total = p.num_samples
    blocks = [(b, min(BLOCK_EDGES, total - b * BLOCK_EDGES))
              for b in range(-(-total // BLOCK_EDGES))]
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda bc: _sample_block(p, *bc), blocks))
    else:
        parts = [_sample_block(p, b, c) for b, c in blocks]
    return np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)


def rmat_generate(p: RmatParams, workers: int = 1) -> Graph:
    """Generate the graph; self-loops and duplicate edges are removed."""
    try:
        edges = sample_edges(p, workers)
    except MemoryError as exc:
        raise MemoryError(
            f"R-MAT scale {p.scale} x edge factor {p.edge_factor} does not fit in memory"
        ) from exc
    return build_graph(edges, p.n)


def with_seed(p: RmatParams, seed: int) -> RmatParams:
    return replace(p, seed=seed)
