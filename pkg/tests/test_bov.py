import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorsos.bov import (
    BovSolution,
    alpha_bov,
    build_bov,
    chi_mean,
    g,
    h,
    h_curve,
    mismatch,
    mismatch_mc,
    round_bov,
    round_bov_mean,
    solve_bov,
)
from rotorsos.instance import RotorInstance

from _closed_forms import h_closed_form

TRIANGLE = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]


def test_single_edge():
    sol = solve_bov([(0, 1, 1.0)])
    assert sol.value == pytest.approx(1.0, abs=1e-6)
    assert sol.M[0, 1] == pytest.approx(-1.0, abs=1e-5)


def test_triangle():
    sol = solve_bov(TRIANGLE)
    assert sol.value == pytest.approx(4.5, abs=1e-5)
    assert np.allclose(sol.M[np.triu_indices(3, 1)], -0.5, atol=1e-5)


def test_empty_graph():
    assert solve_bov([], n=3).value == pytest.approx(0.0, abs=1e-7)


def test_instance_input_uses_its_potential_constant():
    inst = RotorInstance(3, 0.0, 1.0, edges=TRIANGLE, c_pot=1.0)
    assert solve_bov(inst).value == pytest.approx(1.5, abs=1e-5)


def test_build_rejects_bad_edges():
    with pytest.raises(ValueError):
        build_bov([(0, 0, 1.0)])
    with pytest.raises(ValueError):
        build_bov([(0, 5, 1.0)], n=3)


def test_chi_mean_values():
    assert chi_mean(1) == pytest.approx(np.sqrt(2 / np.pi))
    assert chi_mean(2) == pytest.approx(np.sqrt(np.pi) / 2)
    assert mismatch(1) == pytest.approx(0.40423, abs=1e-5)


def test_mismatch_monotone_and_vanishing():
    vals = np.array([mismatch(k) for k in range(1, 201)])
    assert np.all(np.diff(vals) < 0)
    assert np.all((vals > 0) & (vals < 2))
    # 1 - Theta(1/k) scaling of the chi mean
    ks = np.array([50, 100, 200])
    assert np.allclose(ks * np.array([mismatch(k) for k in ks]), 0.5, atol=0.01)


@pytest.mark.parametrize("k", [1, 2, 3, 10])
def test_mismatch_mc(k):
    est = mismatch_mc(k, 50_000, seed=11)
    assert est.within(mismatch(k), 4.0)


def test_h_endpoints_exact():
    for k in (1, 2, 5):
        assert h(k, 1.0).mean == 1.0 and h(k, 1.0).std_err == 0.0
        assert h(k, -1.0).mean == -1.0
    with pytest.raises(ValueError):
        h(3, 1.5)


def test_h_degenerate_k1():
    est = h(1, 0.5, 200_000, seed=3)
    assert est.within(1 / 3, 3.0)


@pytest.mark.parametrize("k", [2, 3, 8])
def test_h_matches_closed_form(k):
    ts = np.linspace(-0.9, 0.9, 7)
    mean, se = h_curve(k, ts, 100_000, seed=5)
    for t, m, s in zip(ts, mean, se):
        assert abs(m - h_closed_form(k, t)) <= 4 * s + 1e-12


def test_h_is_odd_and_deterministic():
    a = h_curve(4, [-0.3, 0.3], 50_000, seed=1)
    b = h_curve(4, [-0.3, 0.3], 50_000, seed=1)
    assert np.array_equal(a[0], b[0])
    assert a[0][0] == pytest.approx(-a[0][1], abs=4 * a[1][0])


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3, 5, 10, 30]))
def test_h_close_to_t_bound(k):
    ts = np.linspace(-1, 1, 21)
    mean, se = h_curve(k, ts, 40_000, seed=2)
    m = mismatch(k)
    bound = np.sqrt(m) * (2 + np.sqrt(m))
    assert np.all(np.abs(mean - ts) <= bound + 4 * se)


def test_g_and_alpha():
    assert g(5, 1.0).mean == 1.0
    est = alpha_bov(6, grid_size=41, samples=20_000, seed=0)
    assert est.alpha >= 1.0
    assert -1 <= est.t_star <= 1
    assert est.g.shape == (41,)
    with pytest.raises(ValueError):
        g(2, -1.0, c_pot=1.0)


def test_alpha_nonincreasing_in_k():
    vals = [alpha_bov(k, 101, 100_000, seed=4) for k in (4, 16, 64)]
    for a, b in zip(vals, vals[1:]):
        assert b.alpha <= a.alpha + 4 * np.hypot(a.std_err, b.std_err)


def test_round_identity_matrix():
    sol = BovSolution(np.eye(4), 0.0, [(0, 1, 1.0), (2, 3, 1.0)], 2.0)
    U, _ = round_bov(sol, 3, seed=0)
    assert np.allclose(np.linalg.norm(U, axis=1), 1.0)
    est = round_bov_mean(sol, 3, 40_000, seed=1)
    assert est.within(2 * 2.0, 4.0)


def test_round_rank_one_gives_identical_vectors():
    sol = BovSolution(np.ones((3, 3)), 0.0, TRIANGLE, 2.0)
    U, value = round_bov(sol, 4, seed=7)
    assert np.allclose(U, U[0])
    assert value == pytest.approx(3 * 3.0)


def test_round_triangle_optimum_concentrates():
    sol = solve_bov(TRIANGLE)
    k = 3
    est = round_bov_mean(sol, k, 60_000, seed=9)
    ts = [sol.M[u, v] for u, v, _ in TRIANGLE]
    hm, hs = h_curve(k, ts, 400_000, seed=10)
    expected = sum(2.0 + x for x in hm)
    assert est.within(expected, 4.0, floor=4 * np.sqrt(np.sum(hs**2)))
    assert est.mean >= sol.value - 1e-6
