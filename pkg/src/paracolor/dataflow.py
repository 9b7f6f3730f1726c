"""Recursive dataflow coloring on an emulated full/empty-bit color board.

Vertices are colored in index precedence: a vertex reads the published
colors of its lower-indexed neighbors only, blocking until each is
published. A worker that finds such a neighbor unclaimed claims it and
colors it first, which keeps every wait pointed at a vertex another worker
is actively processing. Wait chains therefore descend in vertex index and
cannot cycle, and the result equals first-fit greedy in natural order.

Board slots hold one int64: 0 means empty, a positive value is the
published color. Publication is a release compare-and-swap from 0, blocking
reads are acquire loads, so seeing a slot full implies seeing its value.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._atomics import compare_exchange, cpu_yield, fetch_add, load_acquire, load_relaxed
from .errors import DeadlockSuspected, InputError, ProtocolError
from .graph import Graph
from .greedy import first_permissible, new_marks

DEFAULT_TIMEOUT = 30.0

# worker status codes
_OK, _ABORTED, _DOUBLE_PUBLISH = 0, 1, 2
# status columns: code, vertex, deepest stack, vertices processed
_CODE, _VERTEX, _DEPTH, _DONE = range(4)
# progress columns: publications, vertex currently awaited (-1 if none)
_PUBLISHED, _WAITING = range(2)

_SPIN_LIMIT = 1 << 10


class ColorBoard:
    """Vertex-indexed color slots with empty/full publication state."""

    def __init__(self, n: int):
        self.slots = np.zeros(n, dtype=np.int64)

    def __len__(self):
        return len(self.slots)

    def is_full(self, v: int) -> bool:
        return bool(_peek(self.slots, v) != 0)

    def colors(self) -> np.ndarray:
        return self.slots.copy()


class ClaimTable:
    """Per-vertex counters; the caller that sees 0 owns the vertex."""

    def __init__(self, n: int):
        self.state = np.zeros(n, dtype=np.int64)

    def reset(self):
        self.state[:] = 0


@njit(nogil=True, cache=True)
def _peek(slots, v):
    return load_acquire(slots, v)


@njit(nogil=True, cache=True)
def _publish(slots, v, c):
    return compare_exchange(slots, v, 0, c)


@njit(nogil=True, cache=True)
def _claim(state, v):
    return fetch_add(state, v, 1) == 0


def board_purge(board: ColorBoard) -> None:
    """Set every slot to empty with value 0."""
    board.slots[:] = 0


def publish_color(board: ColorBoard, v: int, c: int) -> None:
    if c < 1:
        raise InputError(f"colors are positive, got {c}")
    prev = _publish(board.slots, v, c)
    if prev != 0:
        raise ProtocolError(f"vertex {v} already published with color {prev}")


def read_color_blocking(board: ColorBoard, w: int, timeout: float = DEFAULT_TIMEOUT) -> int:
    """Wait until ``w`` is published and return its color."""
    deadline = time.monotonic() + timeout
    delay = 1e-6
    while True:
        c = _peek(board.slots, w)
        if c:
            return int(c)
        if time.monotonic() >= deadline:
            raise DeadlockSuspected(w, timeout)
        time.sleep(delay)
        delay = min(delay * 2, 1e-3)


def claim(table: ClaimTable, v: int) -> bool:
    """Atomically bump ``v``'s counter; True only for the first caller."""
    return bool(_claim(table.state, v))


@njit(nogil=True)
def _wait_full(slots, w, abort):
    spins = 1
    while True:
        c = load_acquire(slots, w)
        if c != 0:
            return c
        if spins < _SPIN_LIMIT:
            for _ in range(spins):
                load_relaxed(abort, 0)
            spins <<= 1
        else:
            if load_relaxed(abort, 0) != 0:
                return 0
            cpu_yield()


@njit(nogil=True)
def _process(offsets, neighbors, v, slots, state, marks, stack_v, stack_k, stack_dirty,
             pause, abort, progress, status):
    """Color the claimed vertex ``v`` and any lower neighbors it claims on the way.

    The recursion lives in the explicit stacks: ``stack_k`` is the
    neighbor slot to resume at, ``stack_dirty`` records that a nested vertex
    reused ``marks`` (overwriting this frame's labels) so they must be
    rebuilt before choosing a color. Vertices flagged in ``pause`` yield the
    CPU when their frame opens. Returns False on abort or protocol
    violation, with the details in ``status``.
    """
    top = 0
    stack_v[0] = v
    stack_k[0] = offsets[v]
    stack_dirty[0] = 0
    while top >= 0:
        if top + 1 > status[_DEPTH]:
            status[_DEPTH] = top + 1
        u = stack_v[top]
        k = stack_k[top]
        end = offsets[u + 1]
        if k == offsets[u] and pause[u]:
            cpu_yield()
        descended = False
        while k < end:
            w = neighbors[k]
            if w >= u:
                break
            if fetch_add(state, w, 1) == 0:
                stack_k[top] = k
                stack_dirty[top] = 1
                top += 1
                stack_v[top] = w
                stack_k[top] = offsets[w]
                stack_dirty[top] = 0
                descended = True
                break
            progress[_WAITING] = w
            c = _wait_full(slots, w, abort)
            progress[_WAITING] = -1
            if c == 0:
                status[_CODE] = _ABORTED
                status[_VERTEX] = w
                return False
            marks[c] = u
            k += 1
        if descended:
            continue
        if stack_dirty[top]:
            for j in range(offsets[u], end):
                w = neighbors[j]
                if w >= u:
                    break
                marks[load_acquire(slots, w)] = u
        c = first_permissible(marks, u)
        if compare_exchange(slots, u, 0, c) != 0:
            status[_CODE] = _DOUBLE_PUBLISH
            status[_VERTEX] = u
            return False
        progress[_PUBLISHED] += 1
        status[_DONE] += 1
        top -= 1
    return True


@njit(nogil=True)
def _worker(offsets, neighbors, visit, lo, hi, slots, state, marks, stack_v, stack_k,
            stack_dirty, pause, abort, progress, status):
    for i in range(lo, hi):
        v = visit[i]
        if fetch_add(state, v, 1) == 0:
            if not _process(offsets, neighbors, v, slots, state, marks, stack_v, stack_k,
                            stack_dirty, pause, abort, progress, status):
                # release everyone blocked behind vertices this worker holds
                fetch_add(abort, 0, 1)
                return


@dataclass(frozen=True)
class DataflowStats:
    workers: int
    max_wait_chain: int  # deepest nesting of claimed-but-unpublished vertices
    processed_per_worker: tuple


def _stacks(n):
    return (np.empty(n + 1, dtype=np.int64), np.empty(n + 1, dtype=np.int64),
            np.empty(n + 1, dtype=np.int8))


def _launch(g, slots, state, jobs, pause, timeout, poll):
    """Run ``jobs`` (one (visit, lo, hi) triple per worker) under a watchdog.

    The watchdog aborts all workers if no vertex is published for
    ``timeout`` seconds while some worker is blocked.
    """
    w = len(jobs)
    abort = np.zeros(1, dtype=np.int64)
    progress = np.zeros((w, 2), dtype=np.int64)
    progress[:, _WAITING] = -1
    status = np.zeros((w, 4), dtype=np.int64)
    marks = [new_marks(g.max_degree(), g.n) for _ in range(w)]
    stacks = [_stacks(g.n) for _ in range(w)]

    def body(i):
        visit, lo, hi = jobs[i]
        _worker(g.offsets, g.neighbors, visit, lo, hi, slots, state, marks[i], *stacks[i],
                pause, abort, progress[i], status[i])

    threads = [threading.Thread(target=body, args=(i,), daemon=True) for i in range(w)]
    for t in threads:
        t.start()
    last, stalled_since = -1, time.monotonic()
    while True:
        alive = [t for t in threads if t.is_alive()]
        if not alive:
            break
        alive[0].join(poll)
        done = int(progress[:, _PUBLISHED].sum())
        now = time.monotonic()
        if done != last:
            last, stalled_since = done, now
        elif now - stalled_since >= timeout and (progress[:, _WAITING] >= 0).any():
            abort[0] = 1
            break
    for t in threads:
        t.join()

    bad = status[:, _CODE] == _DOUBLE_PUBLISH
    if bad.any():
        raise ProtocolError(f"vertex {status[bad, _VERTEX][0]} published twice")
    if abort[0] or (status[:, _CODE] == _ABORTED).any():
        waiting = status[status[:, _CODE] == _ABORTED, _VERTEX]
        raise DeadlockSuspected(int(waiting[0]) if len(waiting) else -1, timeout)
    return status


def process_vertex(g: Graph, v: int, board: ColorBoard, table: ClaimTable, *,
                   timeout: float = DEFAULT_TIMEOUT) -> int:
    """Color ``v``, whose claim the caller already holds; return its color."""
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} outside [0, {g.n})")
    if table.state[v] == 0:
        raise InputError(f"vertex {v} has not been claimed")
    abort = np.zeros(1, dtype=np.int64)
    progress = np.array([0, -1], dtype=np.int64)
    status = np.zeros(4, dtype=np.int64)
    marks = new_marks(g.max_degree(), g.n)

    def body():
        _process(g.offsets, g.neighbors, v, board.slots, table.state, marks, *_stacks(g.n),
                 np.zeros(g.n, dtype=np.int8), abort, progress, status)

    t = threading.Thread(target=body, daemon=True)
    t.start()
    last, since = -1, time.monotonic()
    while t.is_alive():
        t.join(0.01)
        now = time.monotonic()
        if progress[_PUBLISHED] != last:
            last, since = progress[_PUBLISHED], now
        elif now - since >= timeout:
            abort[0] = 1
    t.join()
    if status[_CODE] == _ABORTED:
        raise DeadlockSuspected(int(status[_VERTEX]), timeout)
    if status[_CODE] == _DOUBLE_PUBLISH:
        raise ProtocolError(f"vertex {status[_VERTEX]} published twice")
    return int(board.slots[v])


def dataflow_run(g: Graph, workers: int = 1, *, schedule_seed: int | None = None,
                 pause_fraction: float = 0.05, timeout: float = DEFAULT_TIMEOUT, board: ColorBoard | None = None,
                 table: ClaimTable | None = None):
    """Dataflow coloring; returns ``(colors, DataflowStats)``.

    Workers sweep contiguous blocks of the vertex sequence. By default the
    sequence is 0..n-1; ``schedule_seed`` shuffles it and the block sizes
    and makes a random ``pause_fraction`` of vertices yield the CPU before
    being colored. That changes claim races and wait patterns but never
    the colors.
    """
    if workers < 1:
        raise InputError(f"worker count must be >= 1, got {workers}")
    board = board or ColorBoard(g.n)
    table = table or ClaimTable(g.n)
    if len(board) != g.n or len(table.state) != g.n:
        raise InputError("board and claim table must match the graph size")
    board_purge(board)
    table.reset()

    if schedule_seed is None:
        visit = np.arange(g.n, dtype=np.int64)
        bounds = np.linspace(0, g.n, workers + 1).astype(np.int64)
        pause = np.zeros(g.n, dtype=np.int8)
    else:
        rng = np.random.default_rng(schedule_seed)
        visit = rng.permutation(g.n).astype(np.int64)
        cuts = np.sort(rng.integers(0, g.n + 1, size=workers - 1))
        bounds = np.concatenate([[0], cuts, [g.n]]).astype(np.int64)
        pause = (rng.random(g.n) < pause_fraction).astype(np.int8)
    jobs = [(visit, bounds[i], bounds[i + 1]) for i in range(workers)]
    if g.n == 0:
        return np.zeros(0, dtype=np.int64), DataflowStats(workers, 0, (0,) * workers)

    status = _launch(g, board.slots, table.state, jobs, pause, timeout,
                     poll=min(0.05, timeout / 4))
    stats = DataflowStats(workers, int(status[:, _DEPTH].max()),
                          tuple(int(x) for x in status[:, _DONE]))
    return board.colors(), stats


def dataflow_color(g: Graph, workers: int = 1, **kwargs) -> np.ndarray:
    """Color ``g`` with the recursive dataflow algorithm."""
    return dataflow_run(g, workers, **kwargs)[0]
