"""Graph file formats.

Text edge list::

    n m
    u v        (m lines, 0-based, each undirected edge once)

Binary CSR (all integers little-endian 64-bit)::

    b"CBG1" | n | m | offsets[n + 1] | neighbors[2m]
"""

from __future__ import annotations

import os

import numpy as np

from .errors import GraphFormatError, InputError
from .graph import Graph, build_graph, from_csr

MAGIC = b"CBG1"


def read_edge_list(path):
    """Parse a text edge list; return ``(edges, n)`` with edges as an (m, 2) array."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    rows = [(i + 1, ln.split()) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise GraphFormatError("missing 'n m' header", line=1)
    lineno, header = rows[0]
    n, m = _ints(header, lineno)
    if n < 0 or m < 0:
        raise GraphFormatError("negative count in header", line=lineno)
    body = rows[1:]
    if len(body) != m:
        raise GraphFormatError(
            f"header declares {m} edges but {len(body)} follow",
            line=body[-1][0] if len(body) > m else len(lines) + 1,
        )
    edges = np.empty((m, 2), dtype=np.int64)
    for i, (lineno, parts) in enumerate(body):
        u, v = _ints(parts, lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"endpoint of ({u}, {v}) outside [0, {n})", line=lineno)
        edges[i] = u, v
    return edges, n


def _ints(parts, lineno):
    if len(parts) != 2:
        raise GraphFormatError(f"expected two integers, got {' '.join(parts)!r}", line=lineno)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"expected two integers, got {' '.join(parts)!r}", line=lineno) from None


def write_edge_list(g: Graph, path) -> None:
    e = g.edges()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m}\n")
        if len(e):
            np.savetxt(fh, e, fmt="%d")


def write_csr(g: Graph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.array([g.n, g.m], dtype="<i8").tobytes())
        fh.write(g.offsets.astype("<i8").tobytes())
        fh.write(g.neighbors.astype("<i8").tobytes())


def read_csr(path) -> Graph:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise GraphFormatError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    if len(data) < 20:
        raise GraphFormatError("truncated header")
    n, m = np.frombuffer(data, dtype="<i8", count=2, offset=4)
    expected = 20 + 8 * (n + 1 + 2 * m)
    if n < 0 or m < 0 or len(data) != expected:
        raise GraphFormatError(f"size {len(data)} does not match n={n}, m={m}")
    words = np.frombuffer(data, dtype="<i8", offset=20).astype(np.int64)
    try:
        return from_csr(words[: n + 1], words[n + 1:])
    except InputError as exc:
        raise GraphFormatError(str(exc)) from None


def is_binary(path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == MAGIC


def load_graph(path) -> Graph:
    """Read either format, chosen by the leading magic bytes."""
    if is_binary(path):
        return read_csr(path)
    edges, n = read_edge_list(path)
    return build_graph(edges, n)


def save_graph(g: Graph, path) -> None:
    """Write binary CSR for ``.bin`` paths, the text edge list otherwise."""
    if os.fspath(path).endswith(".bin"):
        write_csr(g, path)
    else:
        write_edge_list(g, path)
