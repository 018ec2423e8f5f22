"""Regenerate the vendored test instances under tests/data/.

SATLIB's uf20-91 / uf50-218 files are not redistributed here.  This script
draws stand-ins with the same recipe (uniform random 3SAT at the same
variable/clause counts, three distinct variables per clause, signs by fair
coin, unsatisfiable draws discarded) from fixed seeds, so the output is
byte-stable.  Certificates for the uf20 stand-ins come from brute force
over all 2^20 assignments.

    python tools/make_instances.py
"""

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "tests" / "data"


def random_3sat(n, m, rng):
    clauses = []
    for _ in range(m):
        vs = rng.choice(n, size=3, replace=False) + 1
        signs = rng.integers(0, 2, size=3) * 2 - 1
        clauses.append([int(v * s) for v, s in zip(vs, signs)])
    return clauses


def dpll(clauses, assignment=None):
    assignment = dict(assignment or {})
    while True:
        simplified = []
        unit = None
        for c in clauses:
            if any(assignment.get(abs(l)) == (l > 0) for l in c):
                continue
            rest = [l for l in c if abs(l) not in assignment]
            if not rest:
                return None
            if len(rest) == 1 and unit is None:
                unit = rest[0]
            simplified.append(rest)
        if not simplified:
            return assignment
        if unit is None:
            break
        assignment[abs(unit)] = unit > 0
        clauses = simplified
    var = abs(simplified[0][0])
    for val in (True, False):
        res = dpll(simplified, {**assignment, var: val})
        if res is not None:
            return res
    return None


def brute_force_models(n, clauses):
    """Boolean mask over all 2^n assignments (bit i-1 of the index = x_i)."""
    codes = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(codes.size, dtype=bool)
    for c in clauses:
        sat = np.zeros(codes.size, dtype=bool)
        for l in c:
            bit = (codes >> (abs(l) - 1)) & 1
            sat |= (bit == 1) if l > 0 else (bit == 0)
        ok &= sat
    return codes[ok]


def write_cnf(path, n, clauses, note):
    lines = [f"c {note}", "c", f"p cnf {n}  {len(clauses)} "]
    lines += [" " + " ".join(str(l) for l in c) + " 0" for c in clauses]
    lines += ["%", "0", ""]
    path.write_text("\n".join(lines) + "\n")


def make_family(n, m, count, base_seed, certify):
    rng = np.random.default_rng(base_seed)
    made = 0
    draws = 0
    while made < count:
        clauses = random_3sat(n, m, rng)
        draws += 1
        model = dpll(clauses)
        if model is None:
            continue
        made += 1
        name = f"uf{n}-{made:02d}"
        write_cnf(OUT / f"{name}.cnf", n, clauses,
                  f"{name}: uniform random 3-SAT stand-in, n={n} m={m}, family seed {base_seed}, draw {draws}")
        if certify:
            sols = brute_force_models(n, clauses)
            first = int(sols[0])
            cert = [(v if (first >> (v - 1)) & 1 else -v) for v in range(1, n + 1)]
            (OUT / f"{name}.cert").write_text(
                f"c lowest-index model of {len(sols)} found by exhaustive enumeration\n"
                + " ".join(map(str, cert)) + " 0\n")
        print(name, "draws", draws, file=sys.stderr)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    make_family(20, 91, 3, 2020, certify=True)
    make_family(50, 218, 3, 5050, certify=False)
    # small hand-checkable instances for exhaustive ground-state tests (n + m <= 18)
    write_cnf(OUT / "tiny-sat-01.cnf", 5, [[1, -2, 3], [-1, 2, 4], [2, -3, -5], [-2, 4, 5],
                                            [1, 3, -4], [-1, -3, 5], [3, 4, -5], [-2, -4, -5]],
              "tiny satisfiable instance, n=5 m=8")
    write_cnf(OUT / "tiny-sat-02.cnf", 6, [[1, 2, 3], [-1, -2, 4], [2, -4, 5], [-3, -5, 6],
                                            [1, -5, -6], [-1, 3, -6], [4, 5, 6], [-2, -3, -4],
                                            [-4, -5, -6], [1, -2, 6], [2, 3, -5], [-1, 4, 5]],
              "tiny satisfiable instance, n=6 m=12")
    signs = [[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    write_cnf(OUT / "tiny-unsat-01.cnf", 3, [[a * 1, b * 2, c * 3] for a, b, c in signs],
              "all eight sign patterns over x1 x2 x3: unsatisfiable, n=3 m=8")
    write_cnf(OUT / "tiny-unsat-02.cnf", 4,
              [[a * 1, b * 2, c * 3] for a, b, c in signs] + [[1, 2, 4], [-2, 3, -4]],
              "unsatisfiable core plus two clauses touching x4, n=4 m=10")


if __name__ == "__main__":
    main()
