"""Command-line front end.

    ballsep gen    --dim 2 --layout grid --side 10 --spacing 2.5 --seed 42 --out g.txt
    ballsep halve  --in g.txt --algo planar --trace t.jsonl
    ballsep verify --in g.txt --normal "0.6,0.8" --offset 1.5 --m 50
    ballsep bench  --algo nd --sizes 1000,2000,4000 --seed 1 --reps 3 --out b.csv
    ballsep plot   --in g.txt --result r.json --out g.svg

Exit codes: 0 success, 1 error, 2 the result carries a fallback warning.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import instances, oracle, planar, separator, svg
from .errors import BallsepError, FallbackWarning
from .geometry import Hyperplane

EXIT_OK, EXIT_ERROR, EXIT_FALLBACK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for fallback results here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _float_list(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# -- gen -------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.layout == "grid":
        if args.side is None and args.n is None:
            raise UsageError("grid layout needs --side or --n")
        side = args.side if args.side is not None else instances.grid_side(args.n, args.dim)
        balls = instances.jittered_grid(args.dim, side, args.spacing, args.seed, args.n)
    elif args.layout == "clusters":
        if args.n is None:
            raise UsageError("clusters layout needs --n")
        balls = instances.clusters(args.dim, args.n, args.clusters, args.seed, args.spacing)
    else:
        if args.n is None:
            raise UsageError("row layout needs --n")
        balls = instances.collinear_row(args.n, args.spacing, args.dim)
    instances.save(balls, args.out)
    print(f"wrote {len(balls)} balls in dimension {balls.dim} to {args.out}")
    return EXIT_OK


# -- halve -----------------------------------------------------------------

def _nd_params(args, d, n):
    if args.f_log:
        return separator.params_from_f(d, n, max(1.0, math.log2(max(n, 2))), strict=False)
    return separator.params_from_alpha(d, n, args.alpha if args.alpha is not None else 0.25,
                                       strict=False)


def run_halve(balls, args, trace=None) -> dict:
    """Run the chosen algorithm and return the JSON-ready result record."""
    n, d = len(balls), balls.dim
    t0 = time.perf_counter()
    if args.algo == "nd":
        if args.trace:
            raise UsageError("--trace is only available for the planar algorithm")
        params = _nd_params(args, d, n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", FallbackWarning)
            res = separator.find_separator_nd(balls, params)
        wall = (time.perf_counter() - t0) * 1e3
        plane = res.plane
        guarantees = {"min_side": res.guaranteed_min_side, "max_cut": res.guaranteed_max_cut}
        iterations = res.direction_index + 1
        notes = list(res.warnings)
        fallback = res.fallback
        details = {"b": params.b, "k": params.k, "t": params.t,
                   "conditions_met": params.conditions_met, "direction_index": res.direction_index,
                   "spread": res.spread}
    else:
        if d != 2:
            raise UsageError("the planar algorithm needs a 2-dimensional instance")
        params = planar.PlanarParams(gamma=args.gamma, epsilon=args.epsilon,
                                     min_lines=args.min_lines,
                                     optimize_finish=args.optimize_finish)
        res = planar.halving_line(balls, params, trace)
        wall = (time.perf_counter() - t0) * 1e3
        plane = res.plane
        guarantees = {"min_side": (n + 1) // 2 if n % 2 else n // 2, "max_cut": None}
        iterations = res.iterations
        notes = list(res.warnings)
        fallback = False
        details = {"survivors_at_finish": res.survivors_at_finish,
                   "survivor_cut_count": res.survivor_cut_count,
                   "rotation_angle": res.rotation_angle, "set_aside": res.set_aside,
                   "stop_reason": res.stop_reason}
    left, right, on = oracle.count_sides(balls, plane)
    cut, ids = oracle.count_intersected(balls, plane)
    return {
        "algorithm": args.algo,
        "n": n,
        "d": d,
        "normal": [float(x) for x in plane.normal],
        "offset": float(plane.offset),
        "left_closed": left + on,
        "right_closed": right + on,
        "intersected": cut,
        "intersected_ids": ids,
        "guarantees": guarantees,
        "iterations": iterations,
        "warnings": notes,
        "wall_ms": None if args.no_timing else round(wall, 3),
        "fallback": fallback,
        "details": details,
    }


def cmd_halve(args) -> int:
    balls = instances.load(args.infile)
    records = []
    result = run_halve(balls, args, records.append if args.trace else None)
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    print(json.dumps(result, indent=2))
    for note in result["warnings"]:
        print(f"warning: {note}", file=sys.stderr)
    return EXIT_FALLBACK if result["fallback"] else EXIT_OK


# -- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    balls = instances.load(args.infile)
    if len(args.normal) != balls.dim:
        raise UsageError(f"normal has {len(args.normal)} entries, instance dimension is {balls.dim}")
    plane = Hyperplane.from_normal(args.normal, args.offset)
    left, right, on = oracle.count_sides(balls, plane)
    cut, _ = oracle.count_intersected(balls, plane)
    ok = oracle.verify_m_separator(balls, plane, args.m)
    print(f"left_closed {left + on}")
    print(f"right_closed {right + on}")
    print(f"on_plane {on}")
    print(f"intersected {cut}")
    print(f"{'PASS' if ok else 'FAIL'}: {args.m}-separator")
    return EXIT_OK if ok else EXIT_ERROR


# -- bench -----------------------------------------------------------------

def bench_instance(n: int, seed: int, dim: int = 2):
    return instances.jittered_grid(dim, instances.grid_side(n, dim), 2.5, seed, n)


def _bench_one(job):
    algo, n, seed, reps, dim = job
    balls = bench_instance(n, seed, dim)
    ns = argparse.Namespace(algo=algo, alpha=None, f_log=False, trace=None, gamma=0.25,
                            epsilon=0.25, min_lines=24, optimize_finish=False, no_timing=True)
    times = []
    result = None
    for _ in range(reps):
        t0 = time.perf_counter()
        result = run_halve(balls, ns)
        times.append((time.perf_counter() - t0) * 1e3)
    return n, float(np.mean(times)), result["intersected"], result["iterations"]


def cmd_bench(args) -> int:
    if not args.sizes:
        raise UsageError("--sizes must list at least one size")
    if args.reps < 1:
        raise UsageError("--reps must be positive")
    if args.algo == "planar" and args.dim != 2:
        raise UsageError("the planar algorithm needs --dim 2")
    jobs = [(args.algo, n, args.seed, args.reps, args.dim) for n in args.sizes]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    rows.sort(key=lambda r: r[0])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "algo", "mean_ms", "intersected", "intersected_over_sqrt_nlogn",
                     "iterations"])
    for n, mean_ms, cut, iters in rows:
        norm = cut / math.sqrt(n * math.log(n)) if n > 1 else float(cut)
        writer.writerow([n, args.algo, "" if args.no_timing else f"{mean_ms:.3f}", cut,
                         f"{norm:.6f}", iters])
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# -- plot ------------------------------------------------------------------

def cmd_plot(args) -> int:
    balls = instances.load(args.infile)
    out = Path(args.out)
    if args.trace:
        records = [json.loads(line) for line in Path(args.trace).read_text().splitlines()
                   if line.strip()]
        lines, _, _ = planar.prepare_dual(balls)
        alive = lines
        for rec in records:
            path = out.with_name(f"{out.stem}_{rec['iteration']:03d}{out.suffix}")
            path.write_text(svg.dual_svg(alive, rec))
            print(path)
            keep = np.isin(alive.ids, rec["survivor_ids"])
            alive = alive[keep]
        if not records:
            print("trace has no rounds; nothing drawn", file=sys.stderr)
        return EXIT_OK
    plane, ids, counts = None, (), None
    if args.result:
        res = json.loads(Path(args.result).read_text())
        plane = Hyperplane(res["normal"], res["offset"])
        ids = res["intersected_ids"]
        counts = (res["left_closed"], res["right_closed"], res["intersected"])
    out.write_text(svg.primal_svg(balls, plane, ids, counts))
    print(out)
    return EXIT_OK


# -- wiring ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ballsep", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log per-round statistics")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--layout", choices=["grid", "clusters", "row"], default="grid")
    g.add_argument("--side", type=int, help="grid side length (grid has side**dim balls)")
    g.add_argument("--n", type=int, help="number of balls")
    g.add_argument("--clusters", type=int, default=4, help="cluster count for --layout clusters")
    g.add_argument("--spacing", type=float, default=2.5, help="grid pitch, at least 2.2")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="instance file to write")
    g.set_defaults(func=cmd_gen)

    h = sub.add_parser("halve", help="compute a separating hyperplane")
    h.add_argument("--in", dest="infile", required=True, help="instance file")
    h.add_argument("--algo", choices=["nd", "planar"], default="planar",
                   help="planar exact halving line, or the d-dimensional separator")
    mode = h.add_mutually_exclusive_group()
    mode.add_argument("--alpha", type=float, help="nd: balance parameter in (0, 1/2), default 0.25")
    mode.add_argument("--f-log", action="store_true", help="f(n) = log2 n parameters")
    h.add_argument("--gamma", type=float, default=0.25, help="planar: core fraction")
    h.add_argument("--epsilon", type=float, default=0.25, help="planar: subslab width factor")
    h.add_argument("--min-lines", type=int, default=24,
                   help="planar: stop pruning at this many lines")
    h.add_argument("--optimize-finish", action="store_true",
                   help="planar: pick the final point with the fewest cuts")
    h.add_argument("--trace", help="planar: write per-round JSON lines here")
    h.add_argument("--no-timing", action="store_true", help="emit wall_ms as null")
    h.set_defaults(func=cmd_halve)

    v = sub.add_parser("verify", help="check a hyperplane with the brute-force oracle")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--normal", type=_float_list, required=True, help="comma-separated normal")
    v.add_argument("--offset", type=float, required=True)
    v.add_argument("--m", type=int, required=True, help="required centers per closed side")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time an algorithm over instance sizes")
    b.add_argument("--algo", choices=["nd", "planar"], default="planar")
    b.add_argument("--sizes", type=_int_list, required=True, help="comma-separated n values")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--reps", type=int, default=3, help="timed repetitions per size")
    b.add_argument("--dim", type=int, default=2)
    b.add_argument("--workers", type=int, default=1, help="process pool size")
    b.add_argument("--out", help="CSV path (default stdout)")
    b.add_argument("--no-timing", action="store_true", help="leave mean_ms empty")
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plot", help="draw an instance, a result or a trace as SVG")
    pl.add_argument("--in", dest="infile", required=True)
    pl.add_argument("--result", help="JSON written by halve")
    pl.add_argument("--trace", help="trace written by halve --trace; one SVG per round")
    pl.add_argument("--out", required=True, help="SVG path (stem for traces)")
    pl.set_defaults(func=cmd_plot)
    return p


def _glue_vectors(argv):
    """Turn ``--normal -0.6,0.8`` into ``--normal=-0.6,0.8`` so the sign is not read as a flag."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--normal" and i + 1 < len(argv):
            out.append(f"--normal={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_vectors(list(sys.argv[1:] if argv is None else argv)))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ballsep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (BallsepError, OSError, ValueError) as exc:
        print(f"ballsep {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
