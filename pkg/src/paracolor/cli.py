"""Command-line driver: ``paracolor {generate,color,bench,stats}``.

Exit codes: 0 success, 1 invalid coloring, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict

from . import bench
from .errors import GraphFormatError, InputError
from .graph import clustering_report, degree_stats, shuffle_labels
from .io import load_graph, save_graph
from .iterative import SchedulePolicy
from .rmat import preset, rmat_generate

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _int_list(text):
    try:
        values = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("worker counts must be positive")
    return values


def _name_list(text):
    names = [x.strip() for x in text.split(",") if x.strip()]
    bad = [x for x in names if x not in bench.ALGORITHMS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s): {', '.join(bad) or text!r}")
    return names


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="paracolor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a label-shuffled R-MAT graph")
    g.add_argument("--preset", required=True, type=str.lower, choices=["er", "g", "b"])
    g.add_argument("--scale", required=True, type=_positive)
    g.add_argument("--edge-factor", type=_positive, default=8)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--workers", type=_positive, default=1, help="sampling threads")
    g.add_argument("--out", required=True, help="output path; .bin selects binary CSR")

    c = sub.add_parser("color", help="color a graph file and emit a JSON run record")
    c.add_argument("graph")
    c.add_argument("--algorithm", "-a", choices=bench.ALGORITHMS, default="serial")
    c.add_argument("--workers", "-w", type=_positive, default=1)
    c.add_argument("--chunking", choices=["static", "dynamic"], default="static")
    c.add_argument("--chunk-size", type=_positive, default=1024)
    c.add_argument("--serial-cutoff", type=int, default=0,
                   help="iterative: color pending sets this small with one worker")
    c.add_argument("--timeout", type=float, default=30.0,
                   help="dataflow: seconds without progress before aborting")
    c.add_argument("--out", help="run record path (default: stdout)")
    c.add_argument("--coloring", help="write colors here, one per line")
    c.add_argument("--rounds-csv", help="iterative: write per-round statistics as CSV")
    c.add_argument("--embed-coloring", action="store_true",
                   help="include the coloring in the JSON record")

    b = sub.add_parser("bench", help="repeat runs over algorithms and worker counts (CSV)")
    b.add_argument("graph")
    b.add_argument("--algorithms", type=_name_list, default=list(bench.ALGORITHMS))
    b.add_argument("--workers", type=_int_list, default=[1, 2, 4])
    b.add_argument("--reps", "--repetitions", dest="reps", type=_positive, default=3)
    b.add_argument("--out", help="CSV path (default: stdout)")

    s = sub.add_parser("stats", help="degree and clustering statistics")
    s.add_argument("graph")
    s.add_argument("--json", action="store_true")
    return p


def _print_degree_stats(g, stats, out):
    print(f"n            {g.n}", file=out)
    print(f"m            {g.m}", file=out)
    print(f"avg_degree   {stats.avg_degree:.6g}", file=out)
    print(f"max_degree   {stats.max_degree}", file=out)
    print(f"variance     {stats.variance:.6g}", file=out)
    print(f"isolated_pct {stats.isolated_pct:.4g}", file=out)


def cmd_generate(args, out):
    params = preset(args.preset, args.scale, args.edge_factor, args.seed)
    g = shuffle_labels(rmat_generate(params, workers=args.workers), args.seed)
    save_graph(g, args.out)
    bench.meta_path(args.out).write_text(json.dumps({
        "preset": args.preset.upper(), "scale": args.scale,
        "edge_factor": args.edge_factor, "seed": args.seed,
    }))
    _print_degree_stats(g, degree_stats(g), out)
    return EXIT_OK


def cmd_color(args, out):
    g = load_graph(args.graph)
    policy = SchedulePolicy(args.workers, args.chunking, args.chunk_size)
    kw = {"timeout": args.timeout}
    if args.algorithm == "iterative":
        kw = {"policy": policy, "serial_cutoff": args.serial_cutoff}
    elif args.algorithm == "serial":
        kw = {}
    bench.warmup()
    colors, rec = bench.run(g, args.algorithm, args.workers,
                            descriptor=bench.describe(args.graph, g),
                            embed_coloring=args.embed_coloring, **kw)
    text = rec.to_json(indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=out)
    if args.coloring:
        bench.write_coloring(colors, args.coloring)
    if args.rounds_csv and rec.round_stats:
        with open(args.rounds_csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rec.round_stats[0]))
            w.writeheader()
            w.writerows(rec.round_stats)
    return EXIT_OK if rec.valid else EXIT_INVALID


def cmd_bench(args, out):
    g = load_graph(args.graph)
    rows = bench.bench(g, args.graph, args.algorithms, args.workers, args.reps)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            bench.write_csv(rows, fh)
    else:
        bench.write_csv(rows, out)
    return EXIT_OK if all(r["valid"] for r in rows) else EXIT_INVALID


def cmd_stats(args, out):
    g = load_graph(args.graph)
    stats = degree_stats(g)
    report = clustering_report(g)
    if args.json:
        print(json.dumps({"n": g.n, "m": g.m, **asdict(stats),
                          "average_clustering": report.average,
                          "clustering_histogram": report.histogram}, indent=2), file=out)
        return EXIT_OK
    _print_degree_stats(g, stats, out)
    print(f"avg_clustering {report.average:.6g}", file=out)
    print("clustering histogram:", file=out)
    for bucket, count in report.histogram.items():
        print(f"  {bucket:<10} {count}", file=out)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "color": cmd_color, "bench": cmd_bench,
            "stats": cmd_stats}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except GraphFormatError as exc:
        print(f"paracolor: {exc}", file=sys.stderr)
        return EXIT_IO
    except InputError as exc:
        print(f"paracolor: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"paracolor: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
