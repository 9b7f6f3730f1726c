"""Sequential first-fit greedy coloring and coloring checks.

Colors are positive integers; 0 marks an uncolored vertex. The scratch array
of forbidden colors is labelled with the vertex being colored, so it is
filled once and never cleared between vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InputError
from .graph import Graph


def new_marks(max_degree: int, sentinel: int) -> np.ndarray:
    """Forbidden-color scratch array of length ``max_degree + 2``.

    Slot ``c`` holds the label of the last vertex that saw color ``c`` on a
    neighbor; ``sentinel`` must not be a vertex id (``n`` works).
    """
    return np.full(max_degree + 2, sentinel, dtype=np.int64)


@njit(nogil=True, cache=True)
def first_permissible(marks, v):
    """Smallest color ``i > 0`` with ``marks[i] != v``."""
    c = 1
    while marks[c] == v:
        c += 1
    return c


@njit(nogil=True, cache=True)
def _greedy(offsets, neighbors, order, colors, marks):
    for v in order:
        for k in range(offsets[v], offsets[v + 1]):
            marks[colors[neighbors[k]]] = v
        colors[v] = first_permissible(marks, v)


def _check_order(order, n):
    order = np.ascontiguousarray(order, dtype=np.int64)
    if len(order) != n or (n and (order.min() < 0 or order.max() >= n)) \
            or np.any(np.bincount(order, minlength=n) != 1):
        raise InputError("order must be a permutation of the vertices")
    return order


def greedy_color(g: Graph, order=None) -> np.ndarray:
    """First-fit coloring visiting vertices in ``order`` (default 0..n-1)."""
    if order is None:
        order = np.arange(g.n, dtype=np.int64)
    else:
        order = _check_order(order, g.n)
    colors = np.zeros(g.n, dtype=np.int64)
    marks = new_marks(g.max_degree(), g.n)
    _greedy(g.offsets, g.neighbors, order, colors, marks)
    return colors


@dataclass(frozen=True)
class Verification:
    """Problems found in a coloring; empty means valid and complete."""

    conflicts: list  # (v, w) with v < w, same nonzero color
    uncolored: list

    def __len__(self):
        return len(self.conflicts) + len(self.uncolored)

    @property
    def valid(self) -> bool:
        return len(self) == 0


def verify_coloring(g: Graph, colors) -> Verification:
    colors = np.asarray(colors)
    if len(colors) != g.n:
        raise InputError(f"coloring has {len(colors)} entries for {g.n} vertices")
    e = g.edges()
    cu, cv = colors[e[:, 0]], colors[e[:, 1]]
    bad = e[(cu == cv) & (cu != 0)]
    return Verification(
        conflicts=[(int(u), int(v)) for u, v in bad],
        uncolored=[int(v) for v in np.flatnonzero(colors == 0)],
    )


def num_colors(colors) -> int:
    colors = np.asarray(colors)
    if len(colors) == 0:
        return 0
    if np.any(colors <= 0):
        raise InputError("coloring is incomplete")
    return int(colors.max())
