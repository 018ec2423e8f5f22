"""Solve large 3SAT instances through a capacity-limited Ising subsolver.

The pipeline encodes a formula as an Ising model (one ancilla per clause),
stores the coupling graph in CSR form, and repeatedly selects, clamps and
solves small connected subproblems.  :mod:`isingdecomp.timing` models the
latency and energy of the hardware version of the same loop.
"""

from .chancellor import IsingModel, QuboProblem, build_qubo, encode, ising_energy, qubo_to_ising
from .cnf_io import CnfFormula, DimacsError, Literal, evaluate, load_dimacs, parse_dimacs
from .decomposer import Subproblem, bfs_select, clamp, extract_subproblem
from .emulator import AnnealSchedule, solve_anneal, solve_exhaustive
from .ising_graph import CsrGraph, build_csr, neighbors, storage_bits
from .kernels import BACKEND
from .orchestrator import RunReport, SolveConfig, run

__version__ = "0.1.0"

__all__ = [
    "AnnealSchedule", "BACKEND", "CnfFormula", "CsrGraph", "DimacsError", "IsingModel", "Literal",
    "QuboProblem", "RunReport", "SolveConfig", "Subproblem", "bfs_select", "build_csr", "build_qubo",
    "clamp", "encode", "evaluate", "extract_subproblem", "ising_energy", "load_dimacs", "neighbors",
    "parse_dimacs", "qubo_to_ising", "run", "solve_anneal", "solve_exhaustive", "storage_bits",
]
