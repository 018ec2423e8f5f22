"""Variable selection, boundary clamping and subproblem extraction.

Spins ``0..num_vars-1`` are SAT variables; higher indices are clause
ancillas.  Selection walks variables only; ancillas follow the variables
that couple to them.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass

import numpy as np

from .chancellor import IsingModel, ising_energy
from .ising_graph import CsrGraph, check_spins
from .kernels import impl as _kernels


class CapacityError(ValueError):
    """A subproblem would not fit on the subsolver."""


@dataclass(eq=False)
class Subproblem:
    """Clamped local problem.

    Local energy over the free spins is::

        H_sub(s) = -sum_{i<j} j_local[i, j] s_i s_j - sum_i h_local[i] s_i + offset

    and equals the global energy with all other spins held at the
    ``s_global`` snapshot the subproblem was cut from.
    """

    global_ids: np.ndarray
    j_local: np.ndarray
    h_local: np.ndarray
    num_vars_selected: int
    num_ancillas: int
    offset: float
    warm_start: np.ndarray

    @property
    def size(self) -> int:
        return int(self.global_ids.shape[0])


def subproblem_energy(sub: Subproblem, state) -> float:
    s = check_spins(state, sub.size).astype(np.float64)
    return float(sub.offset - 0.5 * s @ sub.j_local @ s - sub.h_local @ s)


# -- per-graph lookup tables ----------------------------------------------

@dataclass(frozen=True)
class _VariableTables:
    neighbors: tuple[tuple[int, ...], ...]   # ascending variable neighbours
    ancillas: tuple[frozenset[int], ...]     # ancillas coupled to each variable


_tables_cache: "weakref.WeakKeyDictionary[CsrGraph, dict[int, _VariableTables]]" = weakref.WeakKeyDictionary()
_dense_cache: "weakref.WeakKeyDictionary[IsingModel, np.ndarray]" = weakref.WeakKeyDictionary()


def _variable_tables(graph: CsrGraph, num_vars: int) -> _VariableTables:
    per_graph = _tables_cache.setdefault(graph, {})
    if num_vars in per_graph:
        return per_graph[num_vars]
    rp, ci = graph.row_ptr, graph.col_idx
    neighbors, ancillas = [], []
    for v in range(num_vars):
        row = ci[rp[v]:rp[v + 1]]
        direct = {int(u) for u in row if u < num_vars}
        anc = frozenset(int(u) for u in row if u >= num_vars)
        # two hops through a shared ancilla
        for a in anc:
            direct.update(int(u) for u in ci[rp[a]:rp[a + 1]] if u < num_vars)
        direct.discard(v)
        neighbors.append(tuple(sorted(direct)))
        ancillas.append(anc)
    tables = _VariableTables(tuple(neighbors), tuple(ancillas))
    per_graph[num_vars] = tables
    return tables


def _dense(model: IsingModel) -> np.ndarray:
    dense = _dense_cache.get(model)
    if dense is None:
        dense = model.dense_couplings()
        dense.flags.writeable = False
        _dense_cache[model] = dense
    return dense


# -- operations ------------------------------------------------------------

def bfs_select(graph: CsrGraph, num_vars: int, start: int | None = None, capacity: int = 50,
               rng: np.random.Generator | None = None) -> list[int]:
    """Breadth-first selection of connected variables under a spin budget.

    A variable is admitted only if the selected variables plus every
    ancilla coupled to them still fit in ``capacity`` spins.  Variables
    that do not fit are skipped but may be admitted later in the same pass
    if reached again.  Neighbours are explored in ascending index order;
    the only randomness is the start variable, drawn from ``rng`` when
    ``start`` is None.

    Returns the selected variables in admission order; empty when the
    start variable alone does not fit.
    """
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    if start is None:
        if rng is None:
            raise ValueError("need either start or rng")
        start = int(rng.integers(num_vars))
    if not 0 <= start < num_vars:
        raise IndexError(f"start variable {start} out of range 0..{num_vars - 1}")

    tables = _variable_tables(graph, num_vars)
    if 1 + len(tables.ancillas[start]) > capacity:
        return []
    selected = [start]
    in_set = {start}
    anc: set[int] = set(tables.ancillas[start])
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in tables.neighbors[v]:
            if len(selected) + len(anc) >= capacity:
                return selected
            if u in in_set:
                continue
            new = tables.ancillas[u] - anc
            if len(selected) + 1 + len(anc) + len(new) > capacity:
                continue
            selected.append(u)
            in_set.add(u)
            anc |= new
            queue.append(u)
    return selected


def clamp(model: IsingModel, graph: CsrGraph, free_set, s_global) -> np.ndarray:
    """Modified fields h'_i = h_i + sum_{j not free} J_ij s_j for i in ``free_set`` (in order)."""
    s = check_spins(s_global, model.num_spins)
    free_ids = np.asarray(list(free_set), dtype=np.int64)
    is_free = np.zeros(model.num_spins, dtype=np.uint8)
    is_free[free_ids] = 1
    return _kernels.clamp_fields(graph.row_ptr, graph.col_idx, graph.values, model.fields,
                                 free_ids, is_free, s)


def coupled_ancillas(graph: CsrGraph, variables, num_vars: int) -> list[int]:
    tables = _variable_tables(graph, num_vars)
    out: set[int] = set()
    for v in variables:
        out |= tables.ancillas[v]
    return sorted(out)


def subproblem_from_free_set(model: IsingModel, graph: CsrGraph, free_ids, s_global,
                             num_vars_selected: int | None = None) -> Subproblem:
    """Cut the clamped subproblem over an explicit ordered list of free spins."""
    s = check_spins(s_global, model.num_spins)
    ids = np.asarray(list(free_ids), dtype=np.int64)
    if len(set(ids.tolist())) != ids.size:
        raise ValueError("free spins must be distinct")
    j_local = np.ascontiguousarray(_dense(model)[np.ix_(ids, ids)])
    h_local = clamp(model, graph, ids, s)
    warm = s[ids].copy()
    sf = warm.astype(np.float64)
    local = -0.5 * sf @ j_local @ sf - h_local @ sf
    offset = ising_energy(model, s) - local
    k = ids.size if num_vars_selected is None else num_vars_selected
    return Subproblem(ids, j_local, h_local, k, ids.size - k, float(offset), warm)


def extract_subproblem(model: IsingModel, graph: CsrGraph, selected, s_global, capacity: int,
                       num_vars: int) -> Subproblem:
    """Subproblem over the selected variables plus every ancilla they couple to."""
    selected = list(selected)
    if not selected:
        raise ValueError("empty selection: at least one variable is required")
    if any(not 0 <= v < num_vars for v in selected):
        raise IndexError("selected indices must be variables (< num_vars)")
    ancillas = coupled_ancillas(graph, selected, num_vars)
    total = len(selected) + len(ancillas)
    if total > capacity:
        raise CapacityError(f"subproblem needs {total} spins, capacity is {capacity}")
    return subproblem_from_free_set(model, graph, selected + ancillas, s_global,
                                    num_vars_selected=len(selected))
