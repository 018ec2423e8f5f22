import itertools
from pathlib import Path

import numpy as np
import pytest

from isingdecomp.cnf_io import load_dimacs

DATA = Path(__file__).parent / "data"
UF20 = ("uf20-01", "uf20-02", "uf20-03")
UF50 = ("uf50-01", "uf50-02", "uf50-03")


def instance(name):
    return load_dimacs(DATA / f"{name}.cnf")


def certificate(name):
    """Stored model of a vendored instance as a bool list."""
    lits = []
    for line in (DATA / f"{name}.cert").read_text().splitlines():
        if line.startswith("c") or not line.strip():
            continue
        lits += [int(t) for t in line.split() if t != "0"]
    return [lit > 0 for lit in sorted(lits, key=abs)]


def all_spin_states(n):
    """Every ±1 vector of length n as rows of an int8 array."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    return np.array(list(itertools.product((-1, 1), repeat=n)), dtype=np.int8)


def brute_energy(couplings, fields, constant, state):
    """Independent energy: direct sum over the coupling dict."""
    e = constant
    for (i, j), v in couplings.items():
        e -= v * state[i] * state[j]
    for i, v in enumerate(fields):
        e -= v * state[i]
    return float(e)


def random_model(rng, n, density=0.5, scale=1.0):
    from isingdecomp.chancellor import IsingModel
    couplings = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                couplings[(i, j)] = float(rng.normal(0, scale))
    fields = rng.normal(0, scale, size=n)
    return IsingModel(n, couplings, fields, float(rng.normal()))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance summary ----------------------------------------------------

ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def record_criterion(number, title, ok, detail):
    ACCEPTANCE_RESULTS.append((number, title, bool(ok), detail))
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} -- {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}")
