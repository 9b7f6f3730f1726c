"""Timed coloring runs and the records and tables they produce."""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .dataflow import DEFAULT_TIMEOUT, dataflow_run
from .errors import InputError
from .graph import Graph, build_graph
from .greedy import greedy_color, num_colors, verify_coloring
from .iterative import SchedulePolicy, iterative_color

ALGORITHMS = ("serial", "iterative", "dataflow")
BENCH_COLUMNS = ["graph", "algorithm", "workers", "rep", "seconds", "colors", "rounds",
                 "conflicts", "valid"]


@dataclass
class RunRecord:
    graph: dict
    algorithm: str
    workers: int
    wall_time_seconds: float
    colors_used: int
    valid: bool
    rounds: int | None = None
    total_conflicts: int | None = None
    round_stats: list = field(default_factory=list)
    max_wait_chain: int | None = None
    coloring: list | None = None

    def to_json(self, **kw) -> str:
        d = asdict(self)
        if d["coloring"] is None:
            del d["coloring"]
        return json.dumps(d, **kw)


def meta_path(graph_path) -> Path:
    """Sidecar file holding the generator parameters of a graph file."""
    p = Path(graph_path)
    return p.with_name(p.name + ".meta.json")


def describe(graph_path, g: Graph) -> dict:
    desc = {"path": str(graph_path), "n": g.n, "m": g.m,
            "preset": None, "scale": None, "edge_factor": None, "seed": None}
    mp = meta_path(graph_path)
    if mp.exists():
        desc.update(json.loads(mp.read_text()))
    return desc


def color_with(g: Graph, algorithm: str, workers: int = 1, *, policy: SchedulePolicy | None = None,
               serial_cutoff: int = 0, timeout: float = DEFAULT_TIMEOUT):
    """Run one algorithm; return ``(colors, seconds, extras)``.

    Only the coloring call itself is timed.
    """
    extras = {}
    if algorithm == "serial":
        t0 = time.perf_counter()
        colors = greedy_color(g)
        dt = time.perf_counter() - t0
    elif algorithm == "iterative":
        policy = policy or SchedulePolicy(workers)
        t0 = time.perf_counter()
        colors, rounds = iterative_color(g, policy, serial_cutoff=serial_cutoff)
        dt = time.perf_counter() - t0
        extras["rounds"] = len(rounds)
        extras["total_conflicts"] = sum(r.conflicts_found for r in rounds)
        extras["round_stats"] = [r.as_dict() for r in rounds]
    elif algorithm == "dataflow":
        t0 = time.perf_counter()
        colors, stats = dataflow_run(g, workers, timeout=timeout)
        dt = time.perf_counter() - t0
        extras["max_wait_chain"] = stats.max_wait_chain
    else:
        raise InputError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    return colors, dt, extras


def run(g: Graph, algorithm: str, workers: int = 1, *, descriptor=None,
        embed_coloring=False, **kw):
    """Color, verify and package the result; returns ``(colors, RunRecord)``."""
    if workers < 1:
        raise InputError(f"worker count must be >= 1, got {workers}")
    colors, dt, extras = color_with(g, algorithm, workers, **kw)
    valid = verify_coloring(g, colors).valid
    rec = RunRecord(
        graph=descriptor or {"n": g.n, "m": g.m},
        algorithm=algorithm,
        workers=1 if algorithm == "serial" else workers,
        wall_time_seconds=dt,
        colors_used=num_colors(colors) if valid else int(colors.max()),
        valid=valid,
        coloring=colors.tolist() if embed_coloring else None,
        **extras,
    )
    return colors, rec


_warm = False


def warmup():
    """Compile every kernel once so timed runs exclude JIT compilation."""
    global _warm
    if _warm:
        return
    g = build_graph([(0, 1), (1, 2), (2, 0), (2, 3)], 4)
    for alg in ALGORITHMS:
        color_with(g, alg, 2)
    iterative_color(g, SchedulePolicy(2, chunking="dynamic", chunk_size=1))
    _warm = True


def bench(g: Graph, graph_name: str, algorithms, worker_list, repetitions: int):
    """One row per (algorithm, workers, rep), then a median row per cell."""
    if repetitions < 1:
        raise InputError("repetitions must be >= 1")
    for a in algorithms:
        if a not in ALGORITHMS:
            raise InputError(f"unknown algorithm {a!r}")
    warmup()
    rows, summary = [], []
    for alg in algorithms:
        counts = [1] if alg == "serial" else list(worker_list)
        for w in counts:
            cell = []
            for rep in range(repetitions):
                _, rec = run(g, alg, w)
                cell.append(rec)
                rows.append({
                    "graph": graph_name, "algorithm": alg, "workers": w, "rep": rep,
                    "seconds": rec.wall_time_seconds, "colors": rec.colors_used,
                    "rounds": _blank(rec.rounds), "conflicts": _blank(rec.total_conflicts),
                    "valid": rec.valid,
                })
            summary.append({
                "graph": graph_name, "algorithm": alg, "workers": w, "rep": "median",
                "seconds": statistics.median(r.wall_time_seconds for r in cell),
                "colors": statistics.median(r.colors_used for r in cell),
                "rounds": _blank(_median_or_none([r.rounds for r in cell])),
                "conflicts": _blank(_median_or_none([r.total_conflicts for r in cell])),
                "valid": all(r.valid for r in cell),
            })
    return rows + summary


def _blank(x):
    return "" if x is None else x


def _median_or_none(xs):
    return None if xs[0] is None else statistics.median(xs)


def write_csv(rows, fh=None) -> str:
    """Write bench rows as CSV to ``fh``; also return the text."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def write_coloring(colors, path) -> None:
    np.savetxt(path, np.asarray(colors, dtype=np.int64), fmt="%d")


def read_coloring(path) -> np.ndarray:
    return np.atleast_1d(np.loadtxt(path, dtype=np.int64, ndmin=1))
