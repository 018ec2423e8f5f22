"""CSR adjacency of the coupling graph and spin-state validation.

The in-memory CSR is symmetric: every coupling J_ij appears in row i and in
row j, which keeps neighbour traversal O(degree).  :func:`storage_bits`
reports the single-direction footprint the hardware stores in DDR.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .chancellor import IsingModel

WORD_BITS = 32

# A spin state is a 1-D int8 array of ±1; this alias is documentation only.
SpinState = np.ndarray


def check_spins(state, n: int | None = None) -> SpinState:
    """Validate a ±1 spin vector and return it as an int8 array."""
    s = np.asarray(state)
    if s.ndim != 1:
        raise ValueError("spin state must be one-dimensional")
    if n is not None and s.shape[0] != n:
        raise ValueError(f"spin state length {s.shape[0]} != {n}")
    if s.size and not np.all((s == 1) | (s == -1)):
        raise ValueError("spin entries must be -1 or +1")
    return s.astype(np.int8, copy=False)


@dataclass(frozen=True, eq=False)
class CsrGraph:
    num_nodes: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.row_ptr[-1])

    @property
    def num_edges(self) -> int:
        """Distinct undirected couplings (each is stored twice)."""
        return self.nnz // 2

    def degree(self, v: int) -> int:
        return int(self.row_ptr[v + 1] - self.row_ptr[v])

    def row(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        if not 0 <= v < self.num_nodes:
            raise IndexError(f"node {v} out of range 0..{self.num_nodes - 1}")
        lo, hi = self.row_ptr[v], self.row_ptr[v + 1]
        return self.col_idx[lo:hi], self.values[lo:hi]


def build_csr(model: "IsingModel") -> CsrGraph:
    n = model.num_spins
    i, j, v = model.pair_arrays
    rows = np.concatenate([i, j])
    cols = np.concatenate([j, i])
    vals = np.concatenate([v, v])
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    row_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(row_ptr, rows + 1, 1)
    np.cumsum(row_ptr, out=row_ptr)
    for arr in (row_ptr, cols, vals):
        arr.flags.writeable = False
    return CsrGraph(n, row_ptr, cols.astype(np.int64, copy=False), vals)


def neighbors(graph: CsrGraph, v: int) -> list[tuple[int, float]]:
    """(u, J_vu) pairs of node ``v`` in ascending ``u``."""
    cols, vals = graph.row(v)
    return [(int(u), float(w)) for u, w in zip(cols, vals)]


def to_coupling_map(graph: CsrGraph) -> dict[tuple[int, int], float]:
    out = {}
    for v in range(graph.num_nodes):
        cols, vals = graph.row(v)
        for u, w in zip(cols, vals):
            if v < u:
                out[(v, int(u))] = float(w)
    return out


def storage_bits(graph: CsrGraph) -> int:
    """Bits for N+1 row pointers plus E column indices and E values.

    Counts each undirected coupling once, as the DDR image does; the
    symmetric in-memory layout here holds 2E of each.
    """
    return (graph.num_nodes + 1 + 2 * graph.num_edges) * WORD_BITS
