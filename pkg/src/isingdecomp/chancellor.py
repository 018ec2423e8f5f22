"""3SAT -> QUBO -> Ising encoding with one ancilla binary per clause.

Binary index layout: ``0..n-1`` are the SAT variables, ``n..n+m-1`` the
clause ancillas (ancilla of clause ``j`` sits at ``n + j``).

Energy conventions::

    E(x) = sum_{i<=j} Q_ij x_i x_j + constant                x in {0,1}
    H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + constant   s in {-1,+1}

with ``x = (s + 1) / 2``.  Both forms agree exactly for every state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .cnf_io import CnfFormula, Literal, check_clause
from .ising_graph import check_spins

Pair = tuple[int, int]


@dataclass(eq=False)
class QuboProblem:
    num_binaries: int
    terms: dict[Pair, float] = field(default_factory=dict)
    constant: float = 0.0

    def __post_init__(self):
        for (i, j) in self.terms:
            if not 0 <= i <= j < self.num_binaries:
                raise ValueError(f"QUBO term ({i}, {j}) outside 0 <= i <= j < {self.num_binaries}")

    def add(self, i: int, j: int, value: float) -> None:
        key = (i, j) if i <= j else (j, i)
        total = self.terms.get(key, 0.0) + value
        if total == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = total

    def energy(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.num_binaries,):
            raise ValueError(f"expected {self.num_binaries} binaries, got shape {x.shape}")
        e = self.constant
        for (i, j), q in self.terms.items():
            e += q * x[i] * x[j]
        return float(e)

    def energies(self, xs) -> np.ndarray:
        """Vectorised :meth:`energy` over rows of a (k, N) 0/1 matrix."""
        xs = np.asarray(xs, dtype=np.float64)
        out = np.full(xs.shape[0], self.constant)
        for (i, j), q in self.terms.items():
            out += q * xs[:, i] * xs[:, j]
        return out


@dataclass(eq=False)
class IsingModel:
    num_spins: int
    couplings: dict[Pair, float]
    fields: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        self.fields = np.asarray(self.fields, dtype=np.float64)
        if self.fields.shape != (self.num_spins,):
            raise ValueError(f"fields must have length {self.num_spins}")
        normalized: dict[Pair, float] = {}
        for (i, j), v in self.couplings.items():
            if i == j:
                raise ValueError(f"self-coupling on spin {i}")
            if not (0 <= i < self.num_spins and 0 <= j < self.num_spins):
                raise ValueError(f"coupling ({i}, {j}) out of range")
            key = (i, j) if i < j else (j, i)
            if key in normalized:
                raise ValueError(f"coupling {key} given twice")
            if v != 0.0:
                normalized[key] = float(v)
        self.couplings = normalized
        if not (np.all(np.isfinite(self.fields)) and np.isfinite(self.constant)
                and all(np.isfinite(v) for v in normalized.values())):
            raise ValueError("Ising coefficients must be finite")

    @classmethod
    def empty(cls, num_spins: int, constant: float = 0.0) -> "IsingModel":
        return cls(num_spins, {}, np.zeros(num_spins), constant)

    @cached_property
    def pair_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Couplings as parallel (i, j, J) arrays, i < j, sorted."""
        keys = sorted(self.couplings)
        i = np.array([k[0] for k in keys], dtype=np.int64)
        j = np.array([k[1] for k in keys], dtype=np.int64)
        v = np.array([self.couplings[k] for k in keys], dtype=np.float64)
        return i, j, v

    def dense_couplings(self) -> np.ndarray:
        """Symmetric N x N matrix with J_ij in both triangles, zero diagonal."""
        out = np.zeros((self.num_spins, self.num_spins))
        i, j, v = self.pair_arrays
        out[i, j] = v
        out[j, i] = v
        return out


def ising_energy(model: IsingModel, state) -> float:
    s = check_spins(state, model.num_spins).astype(np.float64)
    i, j, v = model.pair_arrays
    return float(model.constant - np.dot(v, s[i] * s[j]) - np.dot(model.fields, s))


def ising_energies(model: IsingModel, states) -> np.ndarray:
    """Vectorised energy over rows of a (k, N) ±1 matrix."""
    s = np.asarray(states, dtype=np.float64)
    i, j, v = model.pair_arrays
    return model.constant - (s[:, i] * s[:, j]) @ v - s @ model.fields


# -- clause gadget ---------------------------------------------------------

def clause_penalty(clause: Sequence[Literal], var_indices: Sequence[int], ancilla_index: int) -> dict[Pair, float]:
    """QUBO terms of the gadget for one clause.

    Penalty over literal values (a, b, c) and ancilla w::

        1 - a - b - c + ab + ac + bc + w (2 - a - b - c)

    Minimised over w this is 0 when any literal is true and 1 otherwise.
    A negated literal is substituted as ``1 - x`` and expanded, so the
    result only contains plain binaries.  The constant lives under the key
    ``(-1, -1)``.
    """
    check_clause(clause)
    idx = list(var_indices)
    if len(set(idx)) != 3 or ancilla_index in idx:
        raise ValueError("clause gadget needs three distinct variables and a separate ancilla")

    # literal value = sign * x + offset
    lin = [(-1.0 if lit.negated else 1.0, 1.0 if lit.negated else 0.0) for lit in clause]
    terms: dict[Pair, float] = {}

    def add(i: int, j: int, v: float) -> None:
        if v == 0.0:
            return
        key = (i, j) if i <= j else (j, i)
        terms[key] = terms.get(key, 0.0) + v

    const = -1  # key for the constant
    w = ancilla_index
    add(const, const, 1.0)
    # -a - b - c  and  -w a - w b - w c
    for (sgn, off), x in zip(lin, idx):
        add(x, x, -sgn)
        add(const, const, -off)
        add(w, x, -sgn)
        add(w, w, -off)
    add(w, w, 2.0)
    # ab + ac + bc
    for p in range(3):
        for q in range(p + 1, 3):
            (sa, oa), (sb, ob) = lin[p], lin[q]
            xa, xb = idx[p], idx[q]
            add(xa, xb, sa * sb)
            add(xa, xa, sa * ob)
            add(xb, xb, sb * oa)
            add(const, const, oa * ob)
    return {k: v for k, v in terms.items() if v != 0.0}


def build_qubo(formula: CnfFormula) -> QuboProblem:
    n, m = formula.num_vars, formula.num_clauses
    qubo = QuboProblem(n + m)
    for j, clause in enumerate(formula.clauses):
        gadget = clause_penalty(clause, [lit.variable - 1 for lit in clause], n + j)
        for (a, b), v in gadget.items():
            if a == -1:
                qubo.constant += v
            else:
                qubo.add(a, b, v)
    return qubo


def qubo_to_ising(qubo: QuboProblem) -> IsingModel:
    """Exact change of variables x = (s + 1) / 2."""
    n = qubo.num_binaries
    h = np.zeros(n)
    couplings: dict[Pair, float] = {}
    constant = qubo.constant
    for (i, j), q in qubo.terms.items():
        if i == j:
            h[i] -= q / 2
            constant += q / 2
        else:
            couplings[(i, j)] = couplings.get((i, j), 0.0) - q / 4
            h[i] -= q / 4
            h[j] -= q / 4
            constant += q / 4
    return IsingModel(n, couplings, h, constant)


def encode(formula: CnfFormula) -> IsingModel:
    return qubo_to_ising(build_qubo(formula))


def spins_from_assignment(assignment) -> np.ndarray:
    return np.where(np.asarray(assignment, dtype=bool), 1, -1).astype(np.int8)


def assignment_from_spins(spins) -> np.ndarray:
    return np.asarray(spins) > 0


def minimize_ancillas(model: IsingModel, state, num_vars: int) -> np.ndarray:
    """Set every spin at index >= num_vars to its best value given the rest.

    Requires the trailing spins to be mutually uncoupled (true for the
    clause gadget), so each one can be optimised independently.  Ties go
    to -1.
    """
    s = check_spins(state, model.num_spins).copy()
    i, j, v = model.pair_arrays
    if np.any((i >= num_vars) & (j >= num_vars)):
        raise ValueError("ancilla spins are coupled to each other; independent minimisation is not exact")
    local = model.fields[num_vars:].copy()
    mask = j >= num_vars
    np.add.at(local, j[mask] - num_vars, v[mask] * s[i[mask]])
    s[num_vars:] = np.where(local > 0, 1, -1)
    return s


# -- edge-list text format -------------------------------------------------
#
#   # ising <num_spins>
#   # constant <value>
#   i j J_ij        (one line per coupling, i < j)
#   i h_i           (one line per nonzero field)
#
# Values are written with repr() so a round trip is lossless.

def write_edge_list(model: IsingModel, path: str | Path | None = None) -> str:
    lines = [f"# ising {model.num_spins}", f"# constant {model.constant!r}"]
    for (i, j) in sorted(model.couplings):
        lines.append(f"{i} {j} {model.couplings[(i, j)]!r}")
    for i, hv in enumerate(model.fields):
        if hv != 0.0:
            lines.append(f"{i} {float(hv)!r}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def read_edge_list(text: str) -> IsingModel:
    num_spins = None
    constant = 0.0
    couplings: dict[Pair, float] = {}
    fields: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "#":
            if len(parts) == 3 and parts[1] == "ising":
                num_spins = int(parts[2])
            elif len(parts) == 3 and parts[1] == "constant":
                constant = float(parts[2])
            continue
        if len(parts) == 3:
            couplings[(int(parts[0]), int(parts[1]))] = float(parts[2])
        elif len(parts) == 2:
            fields[int(parts[0])] = float(parts[1])
        else:
            raise ValueError(f"line {lineno}: expected 'i j J' or 'i h', got {raw!r}")
    if num_spins is None:
        raise ValueError("missing '# ising <num_spins>' header")
    h = np.zeros(num_spins)
    for i, v in fields.items():
        h[i] = v
    return IsingModel(num_spins, couplings, h, constant)

