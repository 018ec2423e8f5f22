"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Times the three hot loops on uf20/uf50-sized subproblems and checks that
both backends return identical results.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from isingdecomp.chancellor import encode
from isingdecomp.cnf_io import load_dimacs
from isingdecomp.decomposer import bfs_select, extract_subproblem
from isingdecomp.emulator import AnnealSchedule, solve_anneal, solve_exhaustive
from isingdecomp.ising_graph import build_csr
from isingdecomp.kernels import available_backends, get_backend

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def _subproblem(name, seed=0):
    f = load_dimacs(DATA / f"{name}.cnf")
    m = encode(f)
    g = build_csr(m)
    rng = np.random.default_rng(seed)
    s = rng.choice(np.array([-1, 1], dtype=np.int8), m.num_spins)
    sel = bfs_select(g, f.num_vars, rng=rng)
    return m, g, s, extract_subproblem(m, g, sel, s, 50, f.num_vars)


def _time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':40s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup  identical")
    for name in ("uf20-01", "uf50-01"):
        m, g, s, sub = _subproblem(name)
        ids = sub.global_ids
        is_free = np.zeros(m.num_spins, dtype=np.uint8)
        is_free[ids] = 1
        cases = {
            f"anneal 500 sweeps, {sub.size} spins": lambda k: solve_anneal(sub, AnnealSchedule(), rng=1, backend=k),
            f"exhaustive, {sub.num_vars_selected} enumerated": lambda k: solve_exhaustive(sub, backend=k),
            f"clamp, {ids.size} free of {m.num_spins}": lambda k: k.clamp_fields(
                g.row_ptr, g.col_idx, g.values, m.fields, ids, is_free, s),
        }
        for label, fn in cases.items():
            times, outs = [], []
            for b in backends:
                t, out = _time(lambda: fn(get_backend(b)), args.repeat)
                times.append(t)
                outs.append(out[0] if isinstance(out, tuple) else out)
            same = all(np.array_equal(outs[0], o) for o in outs[1:])
            ratio = times[-1] / times[0] if len(times) > 1 else 1.0
            print(f"{name + ' ' + label:40s} " + " ".join(f"{t * 1e3:10.3f}ms" for t in times)
                  + f"   {ratio:6.1f}x  {same}")


if __name__ == "__main__":
    main()
