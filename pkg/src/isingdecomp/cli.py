"""Command-line entry point: ``isingdecomp {solve,bench,timing}``.

Exit codes for ``solve``: 0 satisfied, 2 iteration cap reached, 1 input or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import __version__, timing
from .cnf_io import DimacsError, load_dimacs
from .emulator import AnnealSchedule
from .kernels import BACKEND
from .orchestrator import SUBSOLVERS, SolveConfig, run

SCHEMA_VERSION = 1
EXIT_SAT, EXIT_ERROR, EXIT_TIMEOUT = 0, 1, 2
BENCH_HEADER = ("instance", "seed", "solved", "iterations", "wall_time_s", "error")

log = logging.getLogger("isingdecomp")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--capacity", type=int, default=50, help="subsolver spin capacity (default 50)")
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--subsolver", choices=SUBSOLVERS, default="anneal")
    p.add_argument("--sweeps", type=int, default=500)
    p.add_argument("--t-start", type=float, default=3.0)
    p.add_argument("--t-end", type=float, default=0.05)
    p.add_argument("--cold-start", action="store_true", help="anneal from a random state instead of the clamped snapshot")
    p.add_argument("--check-initial", action="store_true", help="also test the random initial state before iterating")


def _solve_config(args, seed: int) -> SolveConfig:
    schedule = AnnealSchedule(args.sweeps, args.t_start, args.t_end)
    return SolveConfig(capacity=args.capacity, max_iters=args.max_iters, seed=seed, schedule=schedule,
                       subsolver=args.subsolver, check_initial=args.check_initial, cold_start=args.cold_start)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- solve -----------------------------------------------------------------

def run_document(instance: str, config: SolveConfig, report, wall_s: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "instance": instance,
        "config": config.to_dict(),
        "report": report.to_dict(),
        "metadata": {"wall_clock_s": wall_s, "backend": BACKEND, "version": __version__},
    }


def cmd_solve(args) -> int:
    try:
        formula = load_dimacs(args.path)
        config = _solve_config(args, args.seed)
    except (OSError, DimacsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    t0 = time.perf_counter()
    report = run(formula, config)
    wall = time.perf_counter() - t0
    doc = run_document(str(args.path), config, report, wall)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("instance", "seed", "satisfied", "iterations", "final_energy"))
        w.writerow((args.path, args.seed, int(report.satisfied), report.iterations_used, f"{report.final_energy:.6g}"))
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    log.info("%s: %s after %d iterations (%.2fs)", args.path,
             "SAT" if report.satisfied else "timeout", report.iterations_used, wall)
    return EXIT_SAT if report.satisfied else EXIT_TIMEOUT


# -- bench -----------------------------------------------------------------

def _bench_cell(path: str, seed: int, config: SolveConfig) -> dict:
    try:
        formula = load_dimacs(path)
    except (OSError, DimacsError) as exc:
        return {"instance": Path(path).name, "seed": "", "solved": "", "iterations": "", "wall_time_s": None,
                "error": str(exc)}
    t0 = time.perf_counter()
    report = run(formula, config)
    return {"instance": Path(path).name, "seed": seed, "solved": int(report.satisfied),
            "iterations": report.iterations_used, "wall_time_s": time.perf_counter() - t0, "error": ""}


def bench_rows(paths, seeds, base_config: SolveConfig, jobs: int = 1) -> list[dict]:
    """One row per (instance, seed), ordered by instance then seed; unreadable files get one error row."""
    tasks = []
    for p in paths:
        try:
            load_dimacs(p)
        except (OSError, DimacsError):
            tasks.append((str(p), None, base_config))
            continue
        tasks.extend((str(p), s, replace(base_config, seed=s)) for s in seeds)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_bench_cell, *zip(*tasks)))
    return [_bench_cell(*t) for t in tasks]


def bench_summary(rows: list[dict]) -> dict:
    runs = [r for r in rows if r["error"] == ""]
    solved = [r for r in runs if r["solved"] == 1]
    rate = len(solved) / len(runs) if runs else 0.0
    med = statistics.median(r["iterations"] for r in solved) if solved else ""
    wall = sum(r["wall_time_s"] for r in runs) if runs else 0.0
    return {"instance": "SUMMARY", "seed": len(runs), "solved": f"{rate:.4f}", "iterations": med,
            "wall_time_s": wall, "error": sum(1 for r in rows if r["error"])}


def format_bench(rows: list[dict], wall_time: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = BENCH_HEADER if wall_time else tuple(h for h in BENCH_HEADER if h != "wall_time_s")
    w.writerow(header)
    for r in rows + [bench_summary(rows)]:
        out = []
        for h in header:
            v = r[h]
            out.append(f"{v:.4f}" if isinstance(v, float) else ("" if v is None else str(v)))
        w.writerow(out)
    return buf.getvalue()


def cmd_bench(args) -> int:
    directory = Path(args.dir)
    paths = sorted(directory.glob("*.cnf")) if directory.is_dir() else []
    if not paths:
        print(f"error: no .cnf files in {directory}", file=sys.stderr)
        return EXIT_ERROR
    try:
        config = _solve_config(args, args.seed_base)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    seeds = list(range(args.seed_base, args.seed_base + args.seeds))
    rows = bench_rows(paths, seeds, config, jobs=args.jobs)
    _emit(format_bench(rows, wall_time=not args.no_wall_time), args.out)
    return 0


# -- timing ----------------------------------------------------------------

def _resolve_timing(target: str, mode: str):
    if Path(target).is_file():
        return [(Path(target).stem, timing.read_config(target, mode), None)]
    names = timing.preset_names() if target == "all" else [target]
    out = []
    for name in names:
        cfg = timing.load_preset(name, mode)
        ref_name = timing.preset_reference(name)
        out.append((name, cfg, timing.load_preset(ref_name, mode) if ref_name else None))
    return out


def speedup_table_csv() -> str:
    bram = timing.column_speedups("fpga_bram")
    ext = dict(timing.column_speedups("fpga_extddr"))
    published = timing.decomp_latency_table()["published_geomean"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("benchmark", "speedup_bram", "speedup_extddr"))
    for name, s in bram:
        w.writerow((name, f"{s:.2f}", f"{ext[name]:.2f}"))
    w.writerow(("geomean_computed", f"{timing.geomean(s for _, s in bram):.2f}", f"{timing.geomean(ext.values()):.2f}"))
    w.writerow(("geomean_published", f"{published['fpga_bram']:.2f}", f"{published['fpga_extddr']:.2f}"))
    return buf.getvalue()


def cmd_timing(args) -> int:
    try:
        if args.speedups:
            _emit(speedup_table_csv(), args.out)
            return 0
        targets = _resolve_timing(args.config, args.mode)
        if args.axi is not None or args.pe is not None:
            targets = [(n, timing.scale(c, args.axi or c.axi_bits, args.pe or c.pe_count), r) for n, c, r in targets]
        if args.sweep:
            name, cfg, ref = targets[0]
            ref_decomp = timing.decomp_latency(ref) if ref is not None else None
            text = timing.format_csv(timing.scalability_rows(cfg, ref_decomp), timing.SCALING_HEADER)
        else:
            rows = [timing.report_row(n, c, r) for n, c, r in targets]
            text = timing.format_csv(rows, timing.REPORT_HEADER)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(text, args.out)
    return 0


# -- entry -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isingdecomp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one DIMACS instance")
    p.add_argument("path")
    p.add_argument("--seed", type=int, default=0)
    _add_solver_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="solve every .cnf in a directory for several seeds")
    p.add_argument("dir")
    p.add_argument("--seeds", type=int, default=8, help="seeds per instance")
    p.add_argument("--seed-base", type=int, default=0)
    _add_solver_flags(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-wall-time", action="store_true", help="omit wall time so output is byte-stable")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("timing", help="evaluate the latency/energy model")
    p.add_argument("config", nargs="?", default="all", help="preset name, 'all', or a JSON config file")
    p.add_argument("--mode", choices=timing.MODES, default="serial")
    p.add_argument("--axi", type=int, help="project onto this AXI width")
    p.add_argument("--pe", type=int, help="project onto this PE count")
    p.add_argument("--sweep", action="store_true", help="emit the resource-scaling projection table")
    p.add_argument("--speedups", action="store_true", help="emit decomposition speedups and geomeans")
    p.add_argument("--out")
    p.set_defaults(func=cmd_timing)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
