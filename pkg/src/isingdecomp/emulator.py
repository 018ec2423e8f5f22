"""Software stand-ins for the 50-spin oscillator chip.

``solve_exhaustive`` is an exact minimiser used as an oracle and as a
deterministic subsolver; ``solve_anneal`` is a budgeted Metropolis
annealer that plays the role of the chip in normal runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposer import Subproblem, subproblem_energy
from .ising_graph import check_spins
from .kernels import impl as _kernels

MAX_ENUMERATED_SPINS = 22
TIE_TOL = 1e-9


@dataclass(frozen=True)
class AnnealSchedule:
    sweeps: int = 500
    t_start: float = 3.0
    t_end: float = 0.05

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if not self.t_start >= self.t_end > 0:
            raise ValueError("need t_start >= t_end > 0")

    def betas(self) -> np.ndarray:
        """Inverse temperatures, geometric in temperature from t_start to t_end."""
        return 1.0 / np.geomspace(self.t_start, self.t_end, self.sweeps)


def _enumerated_count(sub: Subproblem) -> int:
    # Spins after the selected variables can be minimised in closed form
    # when they do not couple to each other (the clause ancillas).
    k = sub.num_vars_selected
    if k < sub.size and not np.any(sub.j_local[k:, k:]):
        return k
    return sub.size


def solve_exhaustive(sub: Subproblem, backend=None) -> tuple[np.ndarray, float]:
    """Exact minimiser of the subproblem energy.

    Ties are broken towards the lexicographically smallest state with
    -1 < +1.  Trailing mutually-uncoupled spins are eliminated analytically,
    so the enumeration guard applies to the remaining spins only.
    """
    kern = backend or _kernels
    k = _enumerated_count(sub)
    if k > MAX_ENUMERATED_SPINS:
        raise ValueError(f"{k} spins to enumerate exceeds the guard of {MAX_ENUMERATED_SPINS}")
    J = np.ascontiguousarray(sub.j_local, dtype=np.float64)
    h = np.ascontiguousarray(sub.h_local, dtype=np.float64)
    code, _ = kern.exhaustive_code(J, h, k, TIE_TOL)
    state = np.empty(sub.size, dtype=np.int8)
    bits = (code >> np.arange(k - 1, -1, -1)) & 1
    state[:k] = np.where(bits == 1, 1, -1)
    if k < sub.size:
        tail = h[k:] + J[k:, :k] @ state[:k].astype(np.float64)
        state[k:] = np.where(tail > 0, 1, -1)
    return state, subproblem_energy(sub, state)


def solve_anneal(sub: Subproblem, schedule: AnnealSchedule | None = None, init=None,
                 rng: np.random.Generator | int | None = None, cold_start: bool = False,
                 backend=None) -> tuple[np.ndarray, float]:
    """Metropolis single-spin-flip annealing, returning the best state seen.

    One sweep proposes a flip of every spin in index order.  Among states of
    equal best energy the most recently visited one is returned, so the
    search can drift across plateaus between calls.  ``init`` defaults to
    the subproblem's warm start (the clamped snapshot); ``cold_start``
    draws a uniform random state instead.
    """
    kern = backend or _kernels
    schedule = schedule or AnnealSchedule()
    rng = np.random.default_rng(rng)
    if sub.size == 0:
        empty = np.zeros(0, dtype=np.int8)
        return empty, subproblem_energy(sub, empty)
    if init is None:
        init = rng.choice(np.array([-1, 1], dtype=np.int8), sub.size) if cold_start else sub.warm_start
    s0 = np.ascontiguousarray(check_spins(init, sub.size), dtype=np.int8)

    J = np.ascontiguousarray(sub.j_local, dtype=np.float64)
    h = np.ascontiguousarray(sub.h_local, dtype=np.float64)
    sf = s0.astype(np.float64)
    fields = h + J @ sf
    energy = float(-0.5 * sf @ J @ sf - h @ sf)
    uniforms = rng.random((schedule.sweeps, sub.size))
    best = kern.anneal_sweeps(J, fields, energy, s0, schedule.betas(), uniforms)
    return best, subproblem_energy(sub, best)
