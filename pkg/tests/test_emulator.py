import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_spin_states, random_model
from isingdecomp.chancellor import IsingModel, encode, ising_energy
from isingdecomp.cnf_io import CnfFormula
from isingdecomp.decomposer import Subproblem, extract_subproblem, subproblem_energy, subproblem_from_free_set
from isingdecomp.emulator import MAX_ENUMERATED_SPINS, AnnealSchedule, solve_anneal, solve_exhaustive
from isingdecomp.ising_graph import build_csr
from isingdecomp.kernels import available_backends, get_backend


def _sub(model, s=None):
    n = model.num_spins
    s = np.ones(n, dtype=np.int8) if s is None else s
    return subproblem_from_free_set(model, build_csr(model), range(n), s)


def _brute_min(sub):
    # [DERIVED] exhaustive oracle, first minimiser in (-1 < +1) lexicographic order
    states = all_spin_states(sub.size)
    e = np.array([subproblem_energy(sub, st) for st in states])
    best = int(np.flatnonzero(e <= e.min() + 1e-9 * max(1.0, abs(e.min())))[0])
    return states[best], e[best]


def test_one_spin_field():
    state, e = solve_exhaustive(_sub(IsingModel(1, {}, [3.0])))
    assert state.tolist() == [1] and e == -3


def test_ferromagnet_tie_break():
    state, e = solve_exhaustive(_sub(IsingModel(2, {(0, 1): 1.0}, [0.0, 0.0])))
    assert state.tolist() == [-1, -1] and e == -1


@given(st.integers(0, 2**32 - 1), st.integers(1, 10))
@settings(max_examples=40, deadline=None)
def test_exhaustive_matches_brute_force(seed, n):
    rng = np.random.default_rng(seed)
    m = random_model(rng, n, density=0.5)
    sub = _sub(m, rng.choice(np.array([-1, 1], dtype=np.int8), n))
    state, e = solve_exhaustive(sub)
    ref_state, ref_e = _brute_min(sub)
    assert abs(e - ref_e) <= 1e-9
    assert state.tolist() == ref_state.tolist()


def test_exhaustive_with_ancilla_elimination_matches_brute_force(rng):
    # a clause subproblem whose ancillas are eliminated analytically
    f = CnfFormula.from_ints(5, [[1, -2, 3], [-1, 4, 5], [2, -3, -4], [-2, -4, 5]])
    m = encode(f)
    g = build_csr(m)
    s = rng.choice(np.array([-1, 1], dtype=np.int8), m.num_spins)
    sub = extract_subproblem(m, g, [0, 1, 2], s, 50, 5)
    assert sub.num_ancillas > 0
    state, e = solve_exhaustive(sub)
    _, ref_e = _brute_min(sub)
    assert abs(e - ref_e) <= 1e-9
    assert abs(subproblem_energy(sub, state) - e) <= 1e-12


def test_single_clause_reaches_global_zero():
    # [DERIVED] full-model exhaustive minimum is 0 for a satisfiable clause
    f = CnfFormula.from_ints(3, [[1, 2, -3]])
    m = encode(f)
    full = min(ising_energy(m, st) for st in all_spin_states(4))
    sub = extract_subproblem(m, build_csr(m), [0, 1, 2], np.array([-1, -1, 1, 1], dtype=np.int8), 50, 3)
    _, e = solve_exhaustive(sub)
    assert full == 0 and abs(e) <= 1e-12


def test_exhaustive_guard():
    m = random_model(np.random.default_rng(0), MAX_ENUMERATED_SPINS + 1)
    with pytest.raises(ValueError):
        solve_exhaustive(_sub(m))


def test_zero_model_anneal():
    sub = _sub(IsingModel.empty(4, constant=2.0))
    _, e = solve_anneal(sub, AnnealSchedule(10), rng=0)
    assert e == 2.0


@pytest.mark.parametrize("seed", range(5))
def test_ferromagnet_anneal(seed):
    sub = _sub(IsingModel(2, {(0, 1): 1.0}, [0.0, 0.0]), np.array([1, -1], dtype=np.int8))
    _, e = solve_anneal(sub, AnnealSchedule(1000), rng=seed)
    assert e == -1


def test_anneal_quality_random_20_spin():
    # [DERIVED] best of 10 seeds vs exhaustive optimum, on 10 instances
    hits = 0
    for k in range(10):
        rng = np.random.default_rng(100 + k)
        m = random_model(rng, 20, density=0.3)
        sub = _sub(m, rng.choice(np.array([-1, 1], dtype=np.int8), 20))
        _, emin = solve_exhaustive(sub)
        best = min(solve_anneal(sub, AnnealSchedule(500), rng=seed)[1] for seed in range(10))
        hits += abs(best - emin) <= 1e-9
    print(f"anneal reached the exhaustive minimum on {hits}/10 instances")
    assert hits >= 9


@given(st.integers(0, 2**32 - 1), st.integers(1, 16))
@settings(max_examples=40, deadline=None)
def test_anneal_never_worse_than_init(seed, n):
    rng = np.random.default_rng(seed)
    m = random_model(rng, n)
    sub = _sub(m, rng.choice(np.array([-1, 1], dtype=np.int8), n))
    init = rng.choice(np.array([-1, 1], dtype=np.int8), n)
    _, e = solve_anneal(sub, AnnealSchedule(5, 5.0, 1.0), init=init, rng=seed)
    assert e <= subproblem_energy(sub, init) + 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(1, 16))
@settings(max_examples=40)
def test_flip_delta_matches_recompute(seed, n):
    # the kernels accept flip i with delta = 2 s_i (h_i + sum_j J_ij s_j)
    rng = np.random.default_rng(seed)
    m = random_model(rng, n)
    sub = _sub(m)
    s = rng.choice(np.array([-1, 1], dtype=np.int8), n)
    i = int(rng.integers(n))
    delta = 2.0 * s[i] * (sub.h_local[i] + sub.j_local[i] @ s)
    t = s.copy()
    t[i] = -t[i]
    assert abs(delta - (subproblem_energy(sub, t) - subproblem_energy(sub, s))) <= 1e-9


def test_anneal_determinism(rng):
    m = random_model(rng, 18)
    sub = _sub(m, rng.choice(np.array([-1, 1], dtype=np.int8), 18))
    a = solve_anneal(sub, AnnealSchedule(50), rng=9)
    b = solve_anneal(sub, AnnealSchedule(50), rng=9)
    assert a[0].tolist() == b[0].tolist() and a[1] == b[1]


def test_cold_start_differs_from_warm(rng):
    m = random_model(rng, 12)
    sub = _sub(m)
    warm = solve_anneal(sub, AnnealSchedule(1), rng=1)
    cold = solve_anneal(sub, AnnealSchedule(1), rng=1, cold_start=True)
    assert warm[1] <= subproblem_energy(sub, sub.warm_start)
    assert isinstance(cold[1], float)


def test_empty_subproblem():
    sub = Subproblem(np.zeros(0, dtype=np.int64), np.zeros((0, 0)), np.zeros(0), 0, 0, 1.5,
                     np.zeros(0, dtype=np.int8))
    state, e = solve_anneal(sub)
    assert state.size == 0 and e == 1.5


def test_schedule_validation():
    with pytest.raises(ValueError):
        AnnealSchedule(0)
    with pytest.raises(ValueError):
        AnnealSchedule(10, 0.1, 1.0)
    b = AnnealSchedule(3, 4.0, 1.0).betas()
    assert np.allclose(b, [0.25, 0.5, 1.0])


@pytest.mark.skipif(len(available_backends()) < 2, reason="compiled kernels not built")
@pytest.mark.parametrize("seed", range(8))
def test_backends_bit_identical(seed):
    rng = np.random.default_rng(seed)
    n = 16
    m = random_model(rng, n, density=0.4)
    s = rng.choice(np.array([-1, 1], dtype=np.int8), m.num_spins)
    sub = _sub(m, s)
    cy, py = get_backend("cython"), get_backend("python")
    a = solve_anneal(sub, AnnealSchedule(200), rng=seed, backend=cy)
    b = solve_anneal(sub, AnnealSchedule(200), rng=seed, backend=py)
    assert a[0].tolist() == b[0].tolist() and a[1] == b[1]
    a = solve_exhaustive(sub, backend=cy)
    b = solve_exhaustive(sub, backend=py)
    assert a[0].tolist() == b[0].tolist() and a[1] == b[1]
    g = build_csr(m)
    free = np.sort(rng.choice(n, 6, replace=False)).astype(np.int64)
    is_free = np.zeros(n, dtype=np.uint8)
    is_free[free] = 1
    args = (g.row_ptr, g.col_idx, g.values, m.fields, free, is_free, s)
    assert np.array_equal(cy.clamp_fields(*args), py.clamp_fields(*args))


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_backend("fortran")
