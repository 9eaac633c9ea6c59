"""Exit criteria, one test each; every test logs a PASS/FAIL line for the summary."""

import time
from fractions import Fraction

import numpy as np
import pytest

from rotorsos.bounds import erb_rhs, prod_ratio, spherical_certificate
from rotorsos.bov import alpha_bov, mismatch, mismatch_mc, solve_bov
from rotorsos.instance import RotorInstance
from rotorsos.montecarlo import McConfig
from rotorsos.oracle import ground_energy, hamiltonian_k2, product_state_k2, random_wavefunction_moments
from rotorsos.phasespace import PhasePoly, angular_momentum, star
from rotorsos.polysphere import RELATIONS, check_all
from rotorsos.relax import solve_full, solve_reduced
from rotorsos.rounding import alpha, build_gaussian, rounded_value

pytestmark = pytest.mark.acceptance

SANDWICH_TOL = 1e-5


def test_operator_algebra_suite(acceptance):
    start = time.perf_counter()
    failures = []
    checked = 0
    for k in (2, 3, 4, 5):
        for rep in check_all(k, 4):
            checked += 1
            if not rep.holds:
                failures.append(rep.to_line())
    elapsed = time.perf_counter() - start
    ok = not failures and checked == 4 * len(RELATIONS) and elapsed < 60.0
    acceptance.record(
        "1 operator algebra (R1-R11 incl. Laplacian identities R8-R10, k=2..5, degree<=4)",
        ok,
        f"{checked} checks, {len(failures)} failures, {elapsed:.1f}s (limit 60s)",
    )
    assert ok, failures


def test_moyal_identity(acceptance):
    ok = True
    for k, i, j in [(2, 1, 2), (3, 1, 2), (3, 2, 3), (4, 1, 4)]:
        L = angular_momentum(k, i, j)
        ok &= star(L, L) == L * L - PhasePoly.constant(k, Fraction(1, 2))
    acceptance.record("2 Moyal identity star(L, L) = L^2 - 1/2 (exact)", ok)
    assert ok


def test_chi_mean_mismatch(acceptance):
    details = []
    ok = True
    for k in (1, 2, 3, 10, 100):
        est = mismatch_mc(k, 100_000, seed=2024 + k)
        z = (est.mean - mismatch(k)) / est.std_err
        details.append(f"k={k} z={z:+.2f}")
        ok &= abs(z) <= 4.0
    seq = np.array([mismatch(k) for k in range(1, 201)])
    monotone = bool(np.all(np.diff(seq) < 0))
    ok &= monotone and mismatch(100) < 0.02
    acceptance.record(
        "3 chi-mean mismatch (MC within 4 s.e., monotone, mismatch(100) < 0.02)",
        ok,
        ", ".join(details) + f"; mismatch(100)={mismatch(100):.5f}",
    )
    assert ok


def test_bov_convergence(acceptance):
    start = time.perf_counter()
    ests = [alpha_bov(k, 201, 1_000_000, seed=7) for k in (4, 16, 64)]
    elapsed = time.perf_counter() - start
    nonincreasing = all(
        b.alpha <= a.alpha + 4 * np.hypot(a.std_err, b.std_err) for a, b in zip(ests, ests[1:])
    )
    ok = nonincreasing and ests[-1].alpha < 1.05 and elapsed < 600
    acceptance.record(
        "4 BOV convergence (alpha_bov nonincreasing over k=4,16,64; alpha_bov(64) < 1.05; 1e6 samples)",
        ok,
        ", ".join(f"k={e.k}: {e.alpha:.4f}+-{e.std_err:.1e}" for e in ests) + f"; {elapsed:.0f}s",
    )
    assert ok


def test_triangle_regression(acceptance):
    sol = solve_bov([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], c_pot=2.0)
    ok = abs(sol.value - 4.5) <= 1e-5
    acceptance.record("5 triangle BOV SDP = 4.5 +- 1e-5", ok, f"value {sol.value:.8f}")
    assert ok


def test_end_to_end_sandwich(acceptance):
    inst = RotorInstance(2, 1.0, 1.0, edges=((0, 1, 1.0),), c_pot=2.0)
    _, rm = solve_reduced(inst)
    sdp = rm.objective(inst)
    orc = ground_energy(hamiltonian_k2(inst, 16))
    prod = product_state_k2(inst, 16, restarts=32, seed=0)
    rep = rounded_value(inst, rm, McConfig(1_000_000, 0))
    kin_err = max(abs(v["rounded"] - 2.0 * v["sdp"]) for v in rep.vertices)
    checks = {
        "sdp<=E0": sdp <= orc.ground_energy + SANDWICH_TOL,
        "E0<=h_sep": orc.ground_energy <= prod.value + SANDWICH_TOL,
        "delta<1e-7": orc.delta < 1e-7,
        "rounded>=E0": rep.rounded_value >= orc.ground_energy - SANDWICH_TOL,
        "kinetic ratio 2": kin_err <= 1e-10,
    }
    ok = all(checks.values())
    acceptance.record(
        "6 sandwich k=2 n=2 a=b=1 (SDP <= E0 <= h_sep, rounded >= E0, kinetic ratio 2)",
        ok,
        f"SDP {sdp:.6f} <= E0 {orc.ground_energy:.6f} (delta {orc.delta:.1e}) <= h_sep {prod.value:.6f}; "
        f"rounded {rep.rounded_value:.4f}+-{rep.rounded_std_err:.1e}; kinetic err {kin_err:.1e}; "
        + ", ".join(f"{k}={'ok' if v else 'NO'}" for k, v in checks.items()),
    )
    assert ok


def test_full_vs_reduced(acceptance):
    details = []
    ok = True
    for n, k in [(2, 2), (2, 3), (3, 2)]:
        edges = tuple((v, w, 1.0) for v in range(n) for w in range(v + 1, n))
        inst = RotorInstance(k, 1.0, 1.0, edges=edges, n=n)
        full = solve_full(inst)[0].value
        red = solve_reduced(inst)[1].objective(inst)
        details.append(f"(n={n},k={k}) diff {abs(full - red):.1e}")
        ok &= abs(full - red) <= 1e-5
    acceptance.record("7 full vs reduced optima within 1e-5", ok, "; ".join(details))
    assert ok


def test_gaussian_validity(acceptance):
    instances = [
        RotorInstance(2, 1.0, 1.0, edges=((0, 1, 1.0),)),
        RotorInstance(3, 1.0, 1.0, edges=((0, 1, 1.0), (1, 2, 1.0))),
        RotorInstance(2, 0.5, 2.0, edges=((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0))),
        RotorInstance(4, 1.0, 1.0, edges=((0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (3, 0, 1.0))),
        RotorInstance(3, 1.0, 1.0, edges=((0, 1, -1.0), (1, 2, 1.0))),
    ]
    margins = [build_gaussian(solve_reduced(inst)[1]).validity_margin() for inst in instances]
    single = [build_gaussian(solve_reduced(RotorInstance(k, 1.0, 0.0, n=1))[1]).validity_margin() for k in (2, 3, 5)]
    ok = min(margins + single) >= -1e-9 and max(abs(m) for m in single) < 1e-6
    acceptance.record(
        "8 Gaussian validity (min eig >= -1e-9; n=1 optimum saturates)",
        ok,
        f"min margin {min(margins):.2e}; n=1 margins {', '.join(f'{m:.1e}' for m in single)}",
    )
    assert ok


def test_erb_certificate(acceptance):
    worst_margin = np.inf
    worst_eig = np.inf
    fails = 0
    for seed in range(1000):
        w = random_wavefunction_moments(2, 8, seed)
        margin = w.laplacian - erb_rhs(w.t, 2)
        cert = spherical_certificate(2, w.t, w.spherical)
        worst_margin = min(worst_margin, margin)
        worst_eig = min(worst_eig, *cert.min_eigenvalues)
        fails += (margin < -1e-9) or (not cert.holds)
    ok = fails == 0 and worst_eig >= -1e-10
    acceptance.record(
        "9 Erb inequality and spherical certificate on 1000 random k=2 states",
        ok,
        f"failures {fails}; min <Delta> - bound {worst_margin:.3e}; min block eigenvalue {worst_eig:.3e}",
    )
    assert ok


def test_alpha_trend(acceptance):
    reps = [alpha(k, McConfig(200_000, 11)) for k in (8, 32, 128)]
    a = [r["alpha_k"] for r in reps]
    decreasing = a[0] > a[1] > a[2] > 1.0
    by_C = {C: prod_ratio(3, C)[0] for C in (0.5, 1.0, 2.0)}
    across_k = [prod_ratio(k, 1.0)[0] for k in (3, 5, 9)]
    k_indep = max(across_k) - min(across_k) < 1e-6
    ok = decreasing and k_indep and by_C[1.0] >= 1.0
    acceptance.record(
        "10 alpha_k trend over k=8,32,128 and k-independent product ratio",
        ok,
        ", ".join(f"alpha_{r['k']}={r['alpha_k']:.4f} (bov {r['alpha_bov_k']:.4f})" for r in reps)
        + "; prod_ratio(C): "
        + ", ".join(f"C={C}: {v:.5f}" for C, v in by_C.items())
        + f"; spread over k=3,5,9: {max(across_k) - min(across_k):.1e}",
    )
    assert ok
