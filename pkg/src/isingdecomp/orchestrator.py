"""Iterative refinement loop: select -> clamp/extract -> solve -> feedback -> SAT check."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .chancellor import IsingModel, assignment_from_spins, encode, ising_energy, minimize_ancillas
from .cnf_io import CnfFormula, evaluate
from .decomposer import bfs_select, extract_subproblem
from .emulator import AnnealSchedule, solve_anneal, solve_exhaustive
from .ising_graph import build_csr, check_spins

log = logging.getLogger(__name__)

SUBSOLVERS = ("anneal", "exhaustive")
# FSM states visited by one iteration, in order
STAGES = ("GTU", "CLAMP_SUBQ", "CORE", "FEEDBACK", "SAT_CHECK")


@dataclass(frozen=True)
class SolveConfig:
    capacity: int = 50
    max_iters: int = 5000
    seed: int = 0
    schedule: AnnealSchedule = field(default_factory=AnnealSchedule)
    subsolver: str = "anneal"
    check_initial: bool = False
    cold_start: bool = False

    def __post_init__(self):
        if self.capacity < 4:
            raise ValueError("capacity must be >= 4 to hold one clause gadget")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.subsolver not in SUBSOLVERS:
            raise ValueError(f"subsolver must be one of {SUBSOLVERS}, got {self.subsolver!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class IterationRecord:
    start_var: int
    subproblem_size: int
    sub_energy: float


@dataclass
class RunReport:
    satisfied: bool
    iterations_used: int
    final_energy: float
    energy_trace: list[float]
    assignment: list[bool] | None
    per_iteration: list[IterationRecord]

    def median_subproblem_size(self) -> float:
        sizes = [r.subproblem_size for r in self.per_iteration]
        return float(np.median(sizes)) if sizes else 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def initialize(model: IsingModel, rng: np.random.Generator) -> np.ndarray:
    """Uniform random ±1 state over all spins."""
    return (rng.integers(0, 2, size=model.num_spins, dtype=np.int8) * 2 - 1).astype(np.int8)


def feedback(s_global, sub_result, global_ids) -> np.ndarray:
    """Copy of ``s_global`` with the entries at ``global_ids`` replaced."""
    s = check_spins(s_global).copy()
    ids = np.asarray(global_ids, dtype=np.int64)
    sub = check_spins(sub_result, ids.size)
    if ids.size and (ids.min() < 0 or ids.max() >= s.size):
        raise IndexError("global id out of range")
    s[ids] = sub
    return s


def _certify(formula: CnfFormula, model: IsingModel, s: np.ndarray) -> list[bool] | None:
    x = assignment_from_spins(s[: formula.num_vars])
    ok, _ = evaluate(formula, x)
    if not ok:
        return None
    ground = ising_energy(model, minimize_ancillas(model, s, formula.num_vars))
    if abs(ground) > 1e-9:
        raise AssertionError(f"satisfying assignment has encoded energy {ground}, expected 0")
    return [bool(v) for v in x]


def run(formula: CnfFormula, config: SolveConfig | None = None,
        on_stage: Callable[[str, int], None] | None = None) -> RunReport:
    """Solve ``formula`` by repeated clamped subproblem optimisation.

    Every iteration draws a start variable uniformly, grows a BFS
    selection, solves the clamped subproblem, writes the result back and
    checks the decoded assignment.  A reported solution has always been
    re-checked clause by clause.
    """
    config = config or SolveConfig()
    notify = on_stage or (lambda stage, k: None)
    model = encode(formula)
    graph = build_csr(model)
    n = formula.num_vars
    rng = np.random.default_rng(config.seed)
    s = initialize(model, rng)
    trace: list[float] = []
    records: list[IterationRecord] = []

    if config.check_initial:
        cert = _certify(formula, model, s)
        if cert is not None:
            return RunReport(True, 0, ising_energy(model, s), trace, cert, records)

    for k in range(1, config.max_iters + 1):
        notify("GTU", k)
        start = int(rng.integers(n)) if n else -1
        selected = bfs_select(graph, n, start, config.capacity) if n else []
        if selected:
            notify("CLAMP_SUBQ", k)
            sub = extract_subproblem(model, graph, selected, s, config.capacity, num_vars=n)
            notify("CORE", k)
            if config.subsolver == "exhaustive":
                state, e_sub = solve_exhaustive(sub)
            else:
                state, e_sub = solve_anneal(sub, config.schedule, rng=rng, cold_start=config.cold_start)
            notify("FEEDBACK", k)
            s = feedback(s, state, sub.global_ids)
            records.append(IterationRecord(start, sub.size, e_sub))
        else:
            log.debug("iteration %d: start variable %d does not fit capacity %d", k, start, config.capacity)
            notify("FEEDBACK", k)
            records.append(IterationRecord(start, 0, ising_energy(model, s)))
        energy = ising_energy(model, s)
        trace.append(energy)
        notify("SAT_CHECK", k)
        cert = _certify(formula, model, s)
        if cert is not None:
            return RunReport(True, k, energy, trace, cert, records)

    return RunReport(False, config.max_iters, trace[-1] if trace else ising_energy(model, s), trace, None, records)
