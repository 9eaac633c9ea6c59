"""Product-state bounds and moment-matrix uncertainty certificates.

Product-state bounds compare the best product state with an entangled
comparison curve.  For one site with spherical mean of length t, the kinetic
energy is at least ``A t^2 / (1 - t^2)`` with ``A = a ((k-1)/2)^2`` (Erb's
inequality), and two sites in a product state have potential ``c - s t`` at
best.  Entangled states can saturate the inequality up to a constant C.

The certificates reproduce three small moment-matrix arguments: the Bloch
sphere bound for a qubit, the Heisenberg bound for one continuous mode, and
the spherical bound relating kinetic energy and spherical mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize, minimize_scalar

__all__ = [
    "erb_rhs",
    "prod_lower",
    "prod_lower_argmin",
    "entangled_curve",
    "prod_ratio",
    "qmc_product_edge",
    "UncertaintyCertificate",
    "SphericalMoments",
    "bloch_certificate",
    "heisenberg_certificate",
    "spherical_certificate",
    "CLAMP",
    "CERT_TOL",
]

CLAMP = 1.0 - 1e-9
CERT_TOL = 1e-10


def erb_rhs(mu_norm: float, k: int) -> float:
    """((k-1)/2)^2 mu^2 / (1 - mu^2): lower bound on <Delta> given the spherical mean length."""
    if not 0 <= mu_norm < 1:
        raise ValueError("spherical mean length must lie in [0, 1)")
    return ((k - 1) / 2) ** 2 * mu_norm**2 / (1 - mu_norm**2)


def _u(t):
    t = np.asarray(t, dtype=float)
    return t**2 / (1 - t**2)


def _kin_coeff(k: int, a: float) -> float:
    return a * ((k - 1) / 2) ** 2


def prod_lower_argmin(k: int, a: float, b: float, c_pot: float = 2.0, grid: int = 256):
    """(value, s, t) minimizing A(u(s) + u(t)) + b(c_pot - s t) over [0, 1)^2."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    A = _kin_coeff(k, a)
    if A == 0:
        return b * (c_pot - 1.0), 1.0, 1.0
    F = lambda s, t: A * (_u(s) + _u(t)) + b * (c_pot - s * t)  # noqa: E731
    ts = np.linspace(0.0, CLAMP, grid)
    vals = F(ts[:, None], ts[None, :])
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    s, t = float(ts[i]), float(ts[j])
    best = float(vals[i, j])
    for _ in range(200):
        s = minimize_scalar(lambda x: F(x, t), bounds=(0.0, CLAMP), method="bounded",
                            options={"xatol": 1e-13}).x
        t = minimize_scalar(lambda x: F(s, x), bounds=(0.0, CLAMP), method="bounded",
                            options={"xatol": 1e-13}).x
        cur = float(F(s, t))
        if best - cur < 1e-15:
            best = min(best, cur)
            break
        best = cur
    # the boundary s = t = 0 is the other candidate
    if F(0.0, 0.0) < best:
        return float(F(0.0, 0.0)), 0.0, 0.0
    return best, float(s), float(t)


def prod_lower(k: int, a: float, b: float, c_pot: float = 2.0, grid: int = 256) -> float:
    """Best energy of a product state on one edge, bounded through Erb's inequality."""
    return prod_lower_argmin(k, a, b, c_pot, grid)[0]


def entangled_curve(k: int, a: float, b: float, C: float = 1.0, c_pot: float = 2.0) -> float:
    """inf over t in [0, 1) of 2 A C u(t) + b (c_pot - t)."""
    if a < 0 or b < 0 or C <= 0:
        raise ValueError("need a, b >= 0 and C > 0")
    A = _kin_coeff(k, a)
    if A == 0:
        return b * (c_pot - 1.0)
    F = lambda t: 2 * A * C * _u(t) + b * (c_pot - t)  # noqa: E731
    res = minimize_scalar(F, bounds=(0.0, CLAMP), method="bounded", options={"xatol": 1e-13})
    return float(min(res.fun, F(0.0)))


def prod_ratio(
    k: int, C: float = 1.0, c_pot: float = 2.0, a_range=(1e-4, 1e4), points: int = 161
) -> tuple[float, float]:
    """sup over a (with b = 1) of prod_lower / entangled_curve; returns (ratio, maximizing a)."""
    loga = np.linspace(np.log10(a_range[0]), np.log10(a_range[1]), points)
    ratio = lambda la: prod_lower(k, 10**la, 1.0, c_pot) / entangled_curve(k, 10**la, 1.0, C, c_pot)  # noqa: E731
    vals = np.array([ratio(la) for la in loga])
    i = int(np.argmax(vals))
    lo, hi = loga[max(i - 1, 0)], loga[min(i + 1, points - 1)]
    res = minimize_scalar(lambda la: -ratio(la), bounds=(lo, hi), method="bounded", options={"xatol": 1e-9})
    if -res.fun >= vals[i]:
        return float(-res.fun), float(10**res.x)
    return float(vals[i]), float(10 ** loga[i])


def qmc_product_edge(restarts: int = 16, seed: int = 0, same_vector: bool = False, return_vectors: bool = False):
    """Largest value of (1 - u.v)/4 over Bloch vectors u, v of a product state.

    ``same_vector`` restricts to u = v.  The maximum 1/2 is reached at
    antipodal unit vectors.
    """
    rng = np.random.default_rng(seed)

    def vec(r, th, ph):
        return r * np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])

    def neg(z):
        u = vec(*z[:3])
        v = u if same_vector else vec(*z[3:])
        return -(1 - u @ v) / 4

    bounds = [(0, 1), (0, np.pi), (0, 2 * np.pi)] * 2
    best = None
    for _ in range(restarts):
        z0 = np.array([rng.uniform(lo, hi) for lo, hi in bounds])
        res = minimize(neg, z0, bounds=bounds, method="L-BFGS-B")
        if best is None or res.fun < best.fun:
            best = res
    u = vec(*best.x[:3])
    v = u if same_vector else vec(*best.x[3:])
    value = float(-best.fun)
    return (value, u, v) if return_vectors else value


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass
class UncertaintyCertificate:
    """Blocks of a moment matrix with their determinants and minimum eigenvalues.

    ``bound`` is the quantity the certificate proves nonnegative (bloch,
    heisenberg) or the implied lower bound on the kinetic energy (spherical).
    ``holds`` is False when a block is not PSD or a linear constraint fails.
    """

    kind: str
    labels: list
    blocks: list
    determinants: list
    min_eigenvalues: list
    bound: float
    holds: bool
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        def enc(M):
            M = np.asarray(M)
            return {"re": np.real(M).tolist(), "im": np.imag(M).tolist()}

        return {
            "kind": self.kind,
            "labels": list(self.labels),
            "blocks": [enc(B) for B in self.blocks],
            "determinants": [float(d) for d in self.determinants],
            "min_eigenvalues": [float(e) for e in self.min_eigenvalues],
            "bound": float(self.bound),
            "holds": bool(self.holds),
            "violations": list(self.violations),
        }


def _assemble(kind, labels, blocks, bound, violations, tol) -> UncertaintyCertificate:
    blocks = [np.asarray(B, dtype=complex) for B in blocks]
    dets = [float(np.real(np.linalg.det(B))) for B in blocks]
    eigs = [float(np.linalg.eigvalsh(0.5 * (B + B.conj().T))[0]) for B in blocks]
    violations = list(violations)
    for lab, e in zip(labels, eigs):
        if e < -tol:
            violations.append(f"block {lab} has eigenvalue {e:.3g}")
    return UncertaintyCertificate(kind, list(labels), blocks, dets, eigs, float(bound), not violations, violations)


_PX = np.array([[0, 1], [1, 0]], dtype=complex)
_PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PZ = np.array([[1, 0], [0, -1]], dtype=complex)


def bloch_certificate(state, tol: float = CERT_TOL) -> UncertaintyCertificate:
    """Moment matrix of a qubit in the observables (1, X, Z); its determinant is 1 - |r|^2.

    ``state`` is a 2-vector (normalized here) or a 2x2 density matrix.
    """
    s = np.asarray(state, dtype=complex)
    if s.shape == (2,):
        nrm = np.linalg.norm(s)
        if nrm == 0:
            raise ValueError("zero state vector")
        s = s / nrm
        rho = np.outer(s, s.conj())
    elif s.shape == (2, 2):
        rho = s / np.trace(s)
    else:
        raise ValueError("state must be a 2-vector or a 2x2 density matrix")
    ev = lambda P: np.trace(rho @ P)  # noqa: E731
    ops = [np.eye(2), _PX, _PZ]
    M = np.array([[ev(A @ B) for B in ops] for A in ops])
    x, y, z = (float(np.real(ev(P))) for P in (_PX, _PY, _PZ))
    return _assemble("bloch", ["(1,X,Z)"], [M], 1 - x * x - y * y - z * z, [], tol)


def heisenberg_certificate(moments: dict, hbar: float = 1.0, tol: float = CERT_TOL) -> UncertaintyCertificate:
    """Schur complement of the (1, x, p) moment matrix; det = var_x var_p - cov^2 - hbar^2/4.

    ``moments`` holds ``x2``, ``p2``, ``re_xp`` and optionally ``x``, ``p`` (means).
    """
    mx = float(moments.get("x", 0.0))
    mp = float(moments.get("p", 0.0))
    vx = float(moments["x2"]) - mx * mx
    vp = float(moments["p2"]) - mp * mp
    cov = float(moments["re_xp"]) - mx * mp
    full = np.array([
        [1, mx, mp],
        [mx, moments["x2"], moments["re_xp"] + 0.5j * hbar],
        [mp, moments["re_xp"] - 0.5j * hbar, moments["p2"]],
    ], dtype=complex)
    schur = np.array([[vx, cov + 0.5j * hbar], [cov - 0.5j * hbar, vp]])
    cert = _assemble("heisenberg", ["(1,x,p)", "schur"], [full, schur], vx * vp - cov**2 - hbar**2 / 4, [], tol)
    return cert


@dataclass
class SphericalMoments:
    """Moments of a unit vector f on S^{k-1} with spherical mean t e_1.

    With vhat_1i = -i v_1i:
    ``x1_sq`` = <x_1^2>; ``x_sq_rest`` = sum_{i>=2} <x_i^2>;
    ``xv_rest`` = sum_{i>=2} <x_i vhat_1i>; ``v_sq_rest`` = sum_{i>=2} <vhat_1i^2>;
    ``laplacian`` = <Delta> if known.
    """

    x1_sq: float
    x_sq_rest: float
    xv_rest: complex
    v_sq_rest: float
    laplacian: Optional[float] = None


def spherical_certificate(
    k: int, t: float, moments: SphericalMoments, tol: float = CERT_TOL, constraint_tol: float = 1e-9
) -> UncertaintyCertificate:
    """Check the blocks that prove <Delta> >= ((k-1)/2)^2 t^2 / (1 - t^2)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if not 0 <= t < 1:
        raise ValueError("t must lie in [0, 1)")
    m = moments
    violations = []
    expected_im = (k - 1) * t / 2
    if abs(np.imag(m.xv_rest) - expected_im) > constraint_tol:
        violations.append(
            f"Im sum <x_i vhat_1i> = {np.imag(m.xv_rest):.6g}, commutator requires {expected_im:.6g}"
        )
    if abs(m.x1_sq + m.x_sq_rest - 1) > constraint_tol:
        violations.append(f"sum <x_i^2> = {m.x1_sq + m.x_sq_rest:.6g}, sphere requires 1")
    first = np.array([[1.0, t], [t, m.x1_sq]])
    trace_block = np.array([[m.x_sq_rest, m.xv_rest], [np.conj(m.xv_rest), m.v_sq_rest]])
    bound = erb_rhs(t, k)
    if m.laplacian is not None and m.laplacian < bound - constraint_tol:
        violations.append(f"<Delta> = {m.laplacian:.6g} is below the bound {bound:.6g}")
    if m.v_sq_rest < bound - constraint_tol:
        violations.append(f"sum <vhat_1i^2> = {m.v_sq_rest:.6g} is below the bound {bound:.6g}")
    return _assemble("spherical", ["(1,x1)", "partial-trace(x_i,vhat_1i)"], [first, trace_block], bound,
                     violations, tol)
