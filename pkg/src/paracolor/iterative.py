"""Speculative parallel coloring: tentative rounds plus conflict detection.

Each round colors every pending vertex in parallel from whatever neighbor
colors are visible at the time (possibly stale), then checks the pending
vertices in parallel. A vertex that shares its color with a lower-indexed
neighbor is pending again in the next round. The lowest pending vertex never
conflicts, so every round strictly shrinks the pending set.

Workers are threads running nogil kernels over a shared color array; color
slots are read and written with relaxed atomics, so the only guarantee is
per-slot atomicity.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import asdict, dataclass

import numpy as np
from numba import njit

from ._atomics import fetch_add, load_relaxed, store_relaxed
from .errors import InputError
from .graph import Graph
from .greedy import first_permissible, new_marks


@dataclass(frozen=True)
class SchedulePolicy:
    """How a parallel loop over the pending set is split among workers.

    ``chunking="static"`` gives each worker one contiguous block;
    ``"dynamic"`` lets workers grab ``chunk_size`` slices from a shared cursor.
    ``execution="lockstep"`` replaces threads with a deterministic emulation
    where all workers color their i-th vertex simultaneously, each seeing
    only colors written in earlier steps (static blocks only).
    """

    workers: int = 1
    chunking: str = "static"
    chunk_size: int = 1024
    execution: str = "threads"

    def __post_init__(self):
        if self.workers < 1:
            raise InputError(f"worker count must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise InputError(f"chunk size must be >= 1, got {self.chunk_size}")
        if self.chunking not in ("static", "dynamic"):
            raise InputError(f"unknown chunking {self.chunking!r}")
        if self.execution not in ("threads", "lockstep"):
            raise InputError(f"unknown execution mode {self.execution!r}")


@dataclass(frozen=True)
class RoundStats:
    round_index: int
    pending_size: int
    conflicts_found: int
    tentative_seconds: float
    detect_seconds: float

    def as_dict(self):
        return asdict(self)


@njit(nogil=True, cache=True)
def _tentative_range(offsets, neighbors, pending, lo, hi, colors, marks):
    for i in range(lo, hi):
        v = pending[i]
        for k in range(offsets[v], offsets[v + 1]):
            marks[load_relaxed(colors, neighbors[k])] = v
        store_relaxed(colors, v, first_permissible(marks, v))


@njit(nogil=True, cache=True)
def _tentative_dynamic(offsets, neighbors, pending, cursor, chunk, colors, marks):
    total = len(pending)
    while True:
        lo = fetch_add(cursor, 0, chunk)
        if lo >= total:
            break
        _tentative_range(offsets, neighbors, pending, lo, min(lo + chunk, total), colors, marks)


@njit(nogil=True, cache=True)
def _tentative_lockstep(offsets, neighbors, pending, bounds, colors, marks):
    workers = len(bounds) - 1
    staged = np.zeros(workers, dtype=np.int64)
    steps = 0
    for w in range(workers):
        steps = max(steps, bounds[w + 1] - bounds[w])
    for t in range(steps):
        for w in range(workers):
            i = bounds[w] + t
            if i < bounds[w + 1]:
                v = pending[i]
                for k in range(offsets[v], offsets[v + 1]):
                    marks[colors[neighbors[k]]] = v
                staged[w] = first_permissible(marks, v)
        for w in range(workers):
            i = bounds[w] + t
            if i < bounds[w + 1]:
                colors[pending[i]] = staged[w]


@njit(nogil=True, cache=True)
def _detect_range(offsets, neighbors, pending, lo, hi, colors, out, count):
    for i in range(lo, hi):
        v = pending[i]
        cv = colors[v]
        # neighbor lists are sorted, so the w < v candidates come first
        for k in range(offsets[v], offsets[v + 1]):
            w = neighbors[k]
            if w >= v:
                break
            if colors[w] == cv:
                out[count] = v
                count += 1
                break
    return count


@njit(nogil=True, cache=True)
def _detect_dynamic(offsets, neighbors, pending, cursor, chunk, colors, out):
    total = len(pending)
    count = 0
    while True:
        lo = fetch_add(cursor, 0, chunk)
        if lo >= total:
            break
        count = _detect_range(offsets, neighbors, pending, lo, min(lo + chunk, total),
                              colors, out, count)
    return count


def _bounds(size, workers):
    return np.linspace(0, size, workers + 1).astype(np.int64)


def _run(pool, jobs):
    if pool is None or len(jobs) == 1:
        return [job() for job in jobs]
    return [f.result() for f in [pool.submit(job) for job in jobs]]


def _worker_marks(g, workers):
    return [new_marks(g.max_degree(), g.n) for _ in range(workers)]


def _pool(policy, pool):
    if pool is not None or policy.workers == 1 or policy.execution == "lockstep":
        return nullcontext(pool)
    return ThreadPoolExecutor(policy.workers)


def _as_pending(U):
    return np.ascontiguousarray(U, dtype=np.int64)


def tentative_round(g: Graph, U, colors, policy: SchedulePolicy, *, pool=None, marks=None):
    """Give every vertex of ``U`` a color, in place in ``colors``."""
    U = _as_pending(U)
    w = policy.workers
    marks = marks if marks is not None else _worker_marks(g, w)
    if policy.execution == "lockstep":
        _tentative_lockstep(g.offsets, g.neighbors, U, _bounds(len(U), w), colors, marks[0])
        return
    with _pool(policy, pool) as ex:
        if policy.chunking == "static":
            b = _bounds(len(U), w)
            jobs = [
                (lambda i=i: _tentative_range(g.offsets, g.neighbors, U, b[i], b[i + 1],
                                              colors, marks[i]))
                for i in range(w)
            ]
        else:
            cursor = np.zeros(1, dtype=np.int64)
            jobs = [
                (lambda i=i: _tentative_dynamic(g.offsets, g.neighbors, U, cursor,
                                                policy.chunk_size, colors, marks[i]))
                for i in range(w)
            ]
        _run(ex, jobs)


def detect_conflicts(g: Graph, U, colors, policy: SchedulePolicy, *, pool=None) -> np.ndarray:
    """Vertices of ``U`` sharing a color with some lower-indexed neighbor, ascending."""
    U = _as_pending(U)
    w = 1 if policy.execution == "lockstep" else policy.workers
    with _pool(policy, pool) as ex:
        if policy.chunking == "static" or w == 1:
            b = _bounds(len(U), w)
            bufs = [np.empty(b[i + 1] - b[i], dtype=np.int64) for i in range(w)]
            jobs = [
                (lambda i=i: _detect_range(g.offsets, g.neighbors, U, b[i], b[i + 1],
                                           colors, bufs[i], 0))
                for i in range(w)
            ]
        else:
            cursor = np.zeros(1, dtype=np.int64)
            bufs = [np.empty(len(U), dtype=np.int64) for _ in range(w)]
            jobs = [
                (lambda i=i: _detect_dynamic(g.offsets, g.neighbors, U, cursor,
                                             policy.chunk_size, colors, bufs[i]))
                for i in range(w)
            ]
        counts = _run(ex, jobs)
    found = np.concatenate([buf[:c] for buf, c in zip(bufs, counts)])
    found.sort()
    return found


def iterative_color(g: Graph, policy: SchedulePolicy | None = None, *, serial_cutoff: int = 0):
    """Color ``g`` by speculation and iteration.

    Returns ``(colors, rounds)``. With one worker the result equals
    :func:`greedy_color` in natural order. If ``serial_cutoff > 0``, a
    pending set of at most that many vertices is colored by a single worker.
    """
    policy = policy or SchedulePolicy()
    colors = np.zeros(g.n, dtype=np.int64)
    marks = _worker_marks(g, policy.workers)
    serial = SchedulePolicy()
    rounds = []
    U = np.arange(g.n, dtype=np.int64)
    with _pool(policy, None) as pool:
        while len(U):
            p = serial if len(U) <= serial_cutoff else policy
            t0 = time.perf_counter()
            tentative_round(g, U, colors, p, pool=pool, marks=marks)
            t1 = time.perf_counter()
            R = detect_conflicts(g, U, colors, p, pool=pool)
            t2 = time.perf_counter()
            rounds.append(RoundStats(len(rounds) + 1, len(U), len(R), t1 - t0, t2 - t1))
            U = R
    return colors, rounds
