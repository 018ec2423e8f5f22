"""DIMACS CNF reading/writing and assignment checking for 3SAT formulas.

Variables are 1-based in DIMACS text and on :class:`Literal`; every array
produced from a formula (``var_index``, assignments) is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class DimacsError(ValueError):
    """Raised for malformed DIMACS input or clauses the encoder cannot accept."""


@dataclass(frozen=True)
class Literal:
    variable: int
    negated: bool = False

    def __post_init__(self):
        if self.variable < 1:
            raise DimacsError(f"variable index must be >= 1, got {self.variable}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise DimacsError("0 is a clause terminator, not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.variable if self.negated else self.variable

    def value(self, assignment: Sequence[bool]) -> bool:
        return bool(assignment[self.variable - 1]) != self.negated


Clause = tuple[Literal, Literal, Literal]


def check_clause(clause: Sequence[Literal], num_vars: int | None = None) -> None:
    if len(clause) != 3:
        raise DimacsError(f"clause {[l.to_int() for l in clause]} has arity {len(clause)}, expected 3")
    variables = [lit.variable for lit in clause]
    if len(set(variables)) != 3:
        ints = [lit.to_int() for lit in clause]
        kind = "tautological" if len({abs(v) for v in ints}) < len(set(ints)) else "duplicate-variable"
        raise DimacsError(f"{kind} clause {ints} rejected: literals must use three distinct variables")
    if num_vars is not None:
        for v in variables:
            if v > num_vars:
                raise DimacsError(f"variable {v} out of range 1..{num_vars}")


@dataclass(frozen=True, eq=True)
class CnfFormula:
    """A 3SAT formula in conjunctive normal form."""

    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise DimacsError("num_vars must be non-negative")
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            check_clause(clause, self.num_vars)

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        return cls(num_vars, tuple(tuple(Literal.from_int(x) for x in c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def as_ints(self) -> list[list[int]]:
        return [[lit.to_int() for lit in c] for c in self.clauses]

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.array([[lit.variable - 1 for lit in c] for c in self.clauses], dtype=np.int64).reshape(-1, 3)
        neg = np.array([[lit.negated for lit in c] for c in self.clauses], dtype=bool).reshape(-1, 3)
        idx.flags.writeable = False
        neg.flags.writeable = False
        return idx, neg

    def var_index(self) -> np.ndarray:
        """(m, 3) array of 0-based variable indices (read-only)."""
        return self._arrays[0]

    def negations(self) -> np.ndarray:
        return self._arrays[1]


def parse_dimacs(text: str | bytes) -> CnfFormula:
    """Parse a DIMACS CNF document.

    Accepts ``c`` comment lines, CRLF line endings and the ``%`` / ``0``
    trailer that SATLIB's uniform random files carry after the last clause.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise DimacsError(f"DIMACS input is not ASCII: {exc}") from None

    header: tuple[int, int] | None = None
    clauses: list[list[int]] = []
    current: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # SATLIB end marker; anything after it is padding
            break
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}, expected 'p cnf <vars> <clauses>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer counts in header {line!r}") from None
            if n < 0 or m < 0:
                raise DimacsError(f"line {lineno}: negative counts in header")
            header = (n, m)
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause data before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                if current:
                    clauses.append(current)
                    current = []
                continue
            if abs(lit) > header[0]:
                raise DimacsError(f"line {lineno}: variable {abs(lit)} out of range 1..{header[0]}")
            current.append(lit)

    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is not terminated by 0")
    n, m = header
    if len(clauses) != m:
        raise DimacsError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula.from_ints(n, clauses)


def load_dimacs(path: str | Path) -> CnfFormula:
    return parse_dimacs(Path(path).read_bytes())


def to_dimacs(formula: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    lines.extend(" ".join(str(x) for x in c) + " 0" for c in formula.as_ints())
    return "\n".join(lines) + "\n"


def unsat_clauses(formula: CnfFormula, assignment) -> np.ndarray:
    """Boolean mask over clauses: True where all three literals are false."""
    x = np.asarray(assignment, dtype=bool)
    if x.shape != (formula.num_vars,):
        raise ValueError(f"assignment length {x.size} != num_vars {formula.num_vars}")
    if formula.num_clauses == 0:
        return np.zeros(0, dtype=bool)
    lit_true = x[formula.var_index()] != formula.negations()
    return ~lit_true.any(axis=1)


def evaluate(formula: CnfFormula, assignment) -> tuple[bool, int]:
    """Return ``(satisfied, unsat_count)`` for a length-n boolean assignment."""
    count = int(unsat_clauses(formula, assignment).sum())
    return count == 0, count
