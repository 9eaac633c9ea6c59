import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorsos.bov import alpha_bov, h
from rotorsos.instance import RotorInstance
from rotorsos.montecarlo import McConfig, McEstimate
from rotorsos.relax import ReducedMoment, solve_reduced
from rotorsos.rounding import (
    ValidityViolation,
    alpha,
    build_gaussian,
    rounded_kinetic_vertex,
    rounded_potential_edge,
    rounded_value,
    symplectic_form,
)

PATH3 = ((0, 1, 1.0), (1, 2, 1.0))


def minimal(k, n=1):
    return ReducedMoment(k, np.zeros(n), np.full(n, (k - 1) ** 2 / (4 * k)))


@pytest.mark.parametrize("k", [2, 3, 6])
def test_minimal_point_is_pure(k):
    gc = build_gaussian(minimal(k))
    assert abs(gc.validity_margin()) < 1e-12
    assert rounded_kinetic_vertex(gc, 0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_variances_and_scaling():
    k = 2
    L = 0.7
    gc = build_gaussian(ReducedMoment(k, [0.0], [L]))
    assert gc.sigma[gc.index(0, 0, "x"), gc.index(0, 0, "x")] == pytest.approx(1 / (k - 1))
    assert gc.sigma[gc.index(0, 1, "p"), gc.index(0, 1, "p")] == pytest.approx(k / (k - 1) * L)
    # the rescaling factor at k = 2 is 2
    assert gc.sigma[0, 0] / (1 / k) == pytest.approx(2.0)


def test_large_L_is_strictly_valid():
    gc = build_gaussian(ReducedMoment(3, [0.0, 0.0], [5.0, 5.0]))
    assert gc.validity_margin() > 0.1


def test_invalid_moment_rejected():
    with pytest.raises(ValidityViolation) as info:
        build_gaussian(ReducedMoment(3, [0.0], [0.1]))
    assert info.value.min_eigenvalue < 0


def test_symplectic_form():
    w = symplectic_form(2)
    assert np.allclose(w, -w.T)
    assert np.allclose(w @ w, -np.eye(4))


def test_potential_edge_values():
    k = 3
    rm = ReducedMoment(k, [0.0, 0.0], [1.0, 1.0])
    gc = build_gaussian(rm)
    assert rounded_potential_edge(gc, 0, 1, 1.5, 2.0).mean == pytest.approx(1.5 * 2.0, abs=1e-2)
    aligned = ReducedMoment(k, [0.0, 0.0], [1.0, 1.0], {(0, 1): [[1 / k, 0.0], [0.0, 0.0]]})
    gc = build_gaussian(aligned, check=False)
    assert gc.correlation(0, 1) == pytest.approx(1.0)
    assert rounded_potential_edge(gc, 0, 1, 1.0, 2.0).mean == pytest.approx(3.0)


def test_correlation_read_from_reduced_moment():
    inst = RotorInstance(3, 1.0, 1.0, edges=PATH3)
    _, rm = solve_reduced(inst)
    gc = build_gaussian(rm)
    for u, v, _ in PATH3:
        assert gc.correlation(u, v) == pytest.approx(rm.correlation(u, v), abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 6), st.floats(0.0, 3.0))
def test_kinetic_proportionality(k, extra):
    L = (k - 1) ** 2 / (4 * k) + extra
    gc = build_gaussian(ReducedMoment(k, [0.0], [L]))
    sdp = -(k - 1) ** 2 / 4 + k * L
    rounded = rounded_kinetic_vertex(gc, 0, 1.0, "closed_form")
    assert rounded == pytest.approx(k / (k - 1) * sdp, abs=1e-10)
    assert rounded_kinetic_vertex(gc, 0, 1.0, "wick") == pytest.approx(rounded, abs=1e-10)


def test_wick_handles_nonzero_K():
    k = 3
    K = 0.2
    L = (k - 1) ** 2 / (4 * k) + 0.3 + k * K**2
    gc = build_gaussian(ReducedMoment(k, [K], [L]))
    with pytest.raises(ValueError):
        rounded_kinetic_vertex(gc, 0, 1.0, "closed_form")
    wick = rounded_kinetic_vertex(gc, 0, 1.0, "wick")
    mc = rounded_kinetic_vertex(gc, 0, 1.0, "mc", McConfig(200_000, 3))
    assert isinstance(mc, McEstimate)
    assert mc.within(wick, 4.0)


def test_mc_agrees_with_wick_when_K_zero():
    gc = build_gaussian(ReducedMoment(4, [0.0], [1.2]))
    wick = rounded_kinetic_vertex(gc, 0, 2.0, "wick")
    mc = rounded_kinetic_vertex(gc, 0, 2.0, "mc", McConfig(200_000, 1))
    assert mc.within(wick, 4.0)


def test_unknown_mode():
    with pytest.raises(ValueError):
        rounded_kinetic_vertex(build_gaussian(minimal(2)), 0, 1.0, "exact")


@pytest.mark.parametrize("k", [2, 3, 5])
def test_rounded_value_sandwich(k):
    inst = RotorInstance(k, 1.0, 1.0, edges=PATH3)
    _, rm = solve_reduced(inst)
    rep = rounded_value(inst, rm, McConfig(100_000, 0))
    assert rep.validity_margin >= -1e-9
    assert rep.rounded_value >= rep.sdp_value - 4 * rep.rounded_std_err
    for vert in rep.vertices:
        assert vert["rounded"] == pytest.approx(k / (k - 1) * vert["sdp"], abs=1e-10)
    ab = alpha_bov(k, 101, 100_000, seed=1)
    for e in rep.edges:
        assert e["rounded"] <= ab.alpha * e["sdp"] + 4 * (e["std_err"] + ab.std_err * e["sdp"])
    total = sum(v["rounded"] for v in rep.vertices) + sum(e["rounded"] for e in rep.edges)
    assert rep.rounded_value == pytest.approx(total)
    assert isinstance(rep.vertices[0]["ratio"], float)


def test_rounded_value_edge_uses_h():
    k = 3
    inst = RotorInstance(k, 1.0, 1.0, edges=((0, 1, 1.0),))
    _, rm = solve_reduced(inst)
    rep = rounded_value(inst, rm, McConfig(100_000, 5))
    t = rm.correlation(0, 1)
    est = h(k, t, 100_000, 5)
    assert rep.edges[0]["rounded"] == pytest.approx(2.0 + est.mean, abs=1e-12)


def test_negative_weights_suppress_ratios():
    inst = RotorInstance(2, 1.0, 1.0, edges=((0, 1, -1.0),))
    _, rm = solve_reduced(inst)
    rep = rounded_value(inst, rm, McConfig(20_000, 0))
    assert not rep.ratios_reported
    assert all(v["ratio"] is None for v in rep.vertices + rep.edges)


def test_alpha_report():
    rep = alpha(10, McConfig(20_000, 0), grid_size=41)
    assert rep["k_ratio"] == pytest.approx(10 / 9)
    assert rep["alpha_k"] == max(rep["alpha_bov_k"], rep["k_ratio"])
    with pytest.raises(ValueError):
        alpha(1)
