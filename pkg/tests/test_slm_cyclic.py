import cmath
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_symbols, rel_linf
from cslm.signal_core import papr
from cslm.slm_conventional import run_conventional_slm
from cslm.slm_cyclic import (ShiftTable, check_good_condition, equivalent_phase_vector, gen_mj_shifts,
                             gen_random_shifts, mj_condition_bound_holds, run_cyclic_slm)
from cslm.transform import OpCount, StageTapConfig, ifft


def brute_good(shifts, L):
    """Direct transcription of the pairwise-difference condition."""
    U, M = shifts.shape
    for j in range(U):
        for v in range(j + 1, U):
            for m1 in range(M):
                for m2 in range(M):
                    if m1 != m2 and ((shifts[v, m1] - shifts[j, m1]) - (shifts[v, m2] - shifts[j, m2])) % L == 0:
                        return False
    return True


def test_random_shifts_contract():
    tap = StageTapConfig(64, 2)
    t = gen_random_shifts(6, tap, seed=4)
    assert t.shifts.shape == (6, 4)
    assert np.all(t.shifts[0] == 0)
    assert t.shifts.min() >= 0 and t.shifts.max() <= tap.L - 1
    assert np.array_equal(t.shifts, gen_random_shifts(6, tap, seed=4).shifts)


def test_random_shifts_uniform_per_bin():
    tap = StageTapConfig(64, 2)  # L = 16
    t = gen_random_shifts(25_001, tap, seed=99)  # 10^5 draws after row 0
    draws = t.shifts[1:].ravel()
    n, p = draws.size, 1 / tap.L
    counts = np.bincount(draws, minlength=tap.L)
    assert np.all(np.abs(counts - n * p) <= 3 * np.sqrt(n * p * (1 - p)))


def test_mj_example_n1024():
    tap = StageTapConfig(1024, 3)
    t = gen_mj_shifts(4, tap)
    assert np.array_equal(t.shifts, np.outer(np.arange(4), np.arange(8)))
    assert t.shifts.max() == 21
    assert check_good_condition(t).satisfied


def test_mj_failing_example():
    t = gen_mj_shifts(3, StageTapConfig(8, 2))  # (M-1)(U-1) = 6 >= L = 2
    assert not mj_condition_bound_holds(3, t.tap)
    rep = check_good_condition(t)
    assert not rep.satisfied
    assert not brute_good(t.shifts, t.tap.L)


@pytest.mark.parametrize("N,i,U", [(64, 2, 4), (256, 2, 8), (4096, 4, 8)])
def test_mj_bound_implies_good(N, i, U):
    tap = StageTapConfig(N, i)
    assert mj_condition_bound_holds(U, tap)
    assert check_good_condition(gen_mj_shifts(U, tap)).satisfied


def test_condition_hand_checks():
    tap = StageTapConfig(8, 1)  # M = 2, L = 4
    assert check_good_condition(ShiftTable(np.array([[0, 0], [0, 1]]), tap)).satisfied
    for c in range(tap.L):
        rep = check_good_condition(ShiftTable(np.array([[0, 0], [c, c]]), tap))
        assert rep.violations == [(0, 1, 0, 1)]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(16, 1), (16, 2), (32, 2), (64, 3), (8, 2)]), st.integers(1, 6),
       st.integers(0, 2**32 - 1))
def test_condition_matches_brute_force(cfg, U, seed):
    tap = StageTapConfig(*cfg)
    t = gen_random_shifts(U, tap, seed=seed)
    assert check_good_condition(t).satisfied == brute_good(t.shifts, tap.L)


def test_violation_rate_matches_enumeration():
    # N=8, i=1 (M=2, L=4), U=3: enumerate every pair of non-zero rows
    tap = StageTapConfig(8, 1)
    rows = list(product(range(tap.L), repeat=tap.M))
    good = sum(brute_good(np.array([[0, 0], r1, r2]), tap.L) for r1 in rows for r2 in rows)
    p_exact = good / len(rows) ** 2
    trials = 4000
    hits = sum(check_good_condition(gen_random_shifts(3, tap, seed=s)).satisfied for s in range(trials))
    sigma = np.sqrt(p_exact * (1 - p_exact) / trials)
    assert abs(hits / trials - p_exact) < 4 * sigma
    # each pair independently good w.p. (L-1)/L for M=2; three pairs are not independent
    assert 0.3 < p_exact < 0.5


def test_table_validation():
    tap = StageTapConfig(16, 2)
    with pytest.raises(ValueError):
        ShiftTable(np.array([[0, 0, 0, 0], [0, 0, 0, 4]]), tap)
    with pytest.raises(ValueError):
        ShiftTable(np.array([[1, 0, 0, 0]]), tap)
    with pytest.raises(ValueError):
        ShiftTable(np.array([[0, 0, 0]]), tap)


def test_table_text_round_trip(tmp_path):
    tap = StageTapConfig(64, 3)
    t = gen_random_shifts(5, tap, seed=1)
    path = tmp_path / "shifts.txt"
    t.save(path)
    assert path.read_text().splitlines()[0] == "0 0 0 0 0 0 0 0"
    assert np.array_equal(ShiftTable.load(path, tap).shifts, t.shifts)
    with pytest.raises(ValueError):
        ShiftTable.from_text("0 0\n1\n", StageTapConfig(8, 1))


def test_equivalent_vector_examples():
    assert np.array_equal(equivalent_phase_vector(StageTapConfig(16, 2), [0, 0, 0, 0]), np.ones(16))
    # direct evaluation with W = exp(-2j pi / 8)
    W = cmath.exp(-2j * cmath.pi / 8)
    a, M = [1, 0], 2
    oracle = [W ** (-(k - k % M) * a[k % M]) for k in range(8)]
    got = equivalent_phase_vector(StageTapConfig(8, 1), a)
    assert np.allclose(got, oracle, atol=1e-12)
    assert np.allclose(got, [1, 1, 1j, 1, -1, 1, -1j, 1], atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(16, 2), (64, 3), (128, 4)]), st.integers(0, 2**32 - 1))
def test_equivalent_vector_is_lth_root(cfg, seed):
    tap = StageTapConfig(*cfg)
    row = np.random.default_rng(seed).integers(0, tap.L, tap.M)
    P = equivalent_phase_vector(tap, row)
    assert np.allclose(np.abs(P), 1, atol=1e-12)
    assert np.allclose(P ** tap.L, 1, atol=1e-9)


def test_cyclic_alternatives_equal_conventional_with_equivalent_vectors(rng):
    tap = StageTapConfig(64, 3)
    t = gen_random_shifts(8, tap, seed=0)
    X = random_symbols(rng, 64)
    res = run_cyclic_slm(X, t)
    pvs = np.stack([equivalent_phase_vector(tap, r) for r in t.shifts])
    conv = run_conventional_slm(X, pvs)
    assert rel_linf(res.alternatives, conv.alternatives) < 1e-9
    assert res.selected_index == conv.selected_index


def test_single_row_is_plain_ifft(rng):
    X = random_symbols(rng, 64)
    tap = StageTapConfig(64, 2)
    res = run_cyclic_slm(X, gen_mj_shifts(1, tap))
    full, ops = ifft(X)
    assert np.array_equal(res.selected_signal, full)
    assert res.op_count == ops


def test_selection_and_op_count(rng):
    X = random_symbols(rng, 256)
    tap = StageTapConfig(256, 3)
    res = run_cyclic_slm(X, gen_random_shifts(4, tap, seed=3))
    assert res.selected_papr.db <= papr(ifft(X)[0]).db
    assert res.selected_papr.db == min(p.db for p in res.papr_all)
    assert res.op_count == OpCount(cmul=128 * 8 + 3 * 128 * 3, cadd=256 * 8 + 3 * 256 * 3)


def test_dimension_mismatch(rng):
    with pytest.raises(ValueError):
        run_cyclic_slm(random_symbols(rng, 32), gen_mj_shifts(2, StageTapConfig(64, 2)))


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 8), st.data())
def test_demapping_recovers_symbols(n, data):
    N = 1 << n
    tap = StageTapConfig(N, data.draw(st.integers(1, n - 1)))
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    X = random_symbols(rng, N)
    t = gen_random_shifts(4, tap, seed=seed)
    res = run_cyclic_slm(X, t)
    X_rx = np.fft.fft(res.selected_signal) / N
    P = equivalent_phase_vector(tap, t.shifts[res.selected_index])
    assert rel_linf(X_rx / P, X) < 1e-9
