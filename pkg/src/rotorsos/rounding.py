"""Gaussian rounding of the reduced moment relaxation.

A feasible reduced moment matrix M' becomes the covariance of a bosonic
Gaussian state on 2nk phase-space coordinates.  Momentum is identified with
``-q`` (a sign flip that turns the relaxation's fixed imaginary part
``-(k-1)/(2k)`` into the canonical ``+1/2`` after rescaling by k/(k-1)), and
each coordinate index i gets an identical copy of the per-vertex block.

Rounded energies are then evaluated per term:

* edge terms depend only on the x-sector correlation and equal
  ``w (c_pot + h(k, t))`` with h from the classical rounding analysis;
* vertex terms are expectations of the Weyl symbol of the kinetic operator,
  available in closed form (when x and p are uncorrelated), by Wick
  expansion, or by sampling the Wigner function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np

from . import bov
from .instance import RotorInstance
from .montecarlo import McConfig, McEstimate, RunningStats, chunk_sizes, substream
from .phasespace import MomentSpec, kinetic_weyl_symbol, wick_expectation
from .relax import ReducedMoment
from .sdpcore import min_eig, psd_factor, real_embedding

__all__ = [
    "GaussianCovariance",
    "ValidityViolation",
    "build_gaussian",
    "symplectic_form",
    "rounded_potential_edge",
    "rounded_kinetic_vertex",
    "RoundingReport",
    "rounded_value",
    "alpha",
    "VALIDITY_TOL",
    "KINETIC_MODES",
]

VALIDITY_TOL = 1e-9
KINETIC_MODES = ("closed_form", "wick", "mc")


class ValidityViolation(ValueError):
    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"covariance violates the uncertainty relation: min eigenvalue {min_eigenvalue:.3g}")


def symplectic_form(modes: int) -> np.ndarray:
    """Block-diagonal form with [[0, 1], [-1, 0]] per (x, p) pair."""
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass
class GaussianCovariance:
    """Covariance over interleaved coordinates (x_{v,i}, p_{v,i}); index 2(vk+i) + {0, 1}."""

    n: int
    k: int
    sigma: np.ndarray
    omega: np.ndarray = field(repr=False)

    def index(self, v: int, i: int, kind: str) -> int:
        return 2 * (v * self.k + i) + (0 if kind == "x" else 1)

    def validity_matrix(self) -> np.ndarray:
        return self.sigma + 0.5j * self.omega

    def validity_margin(self) -> float:
        """Minimum eigenvalue of sigma + (i/2) Omega, computed on its real embedding."""
        return min_eig(real_embedding(self.validity_matrix()))

    def correlation(self, v: int, w: int) -> float:
        a, b = self.index(v, 0, "x"), self.index(w, 0, "x")
        return float(self.sigma[a, b] / np.sqrt(self.sigma[a, a] * self.sigma[b, b]))

    def vertex_marginal(self, v: int) -> np.ndarray:
        """Covariance of vertex v in (x_1..x_k, p_1..p_k) order."""
        idx = [self.index(v, i, "x") for i in range(self.k)] + [self.index(v, i, "p") for i in range(self.k)]
        return self.sigma[np.ix_(idx, idx)]


def build_gaussian(rm: ReducedMoment, check: bool = True, tol: float = VALIDITY_TOL) -> GaussianCovariance:
    """sigma = (k/(k-1)) Re(D M' D (x) I_k), with D flipping the sign of every q row."""
    k, n = rm.k, rm.n
    D = np.diag(np.tile([1.0, -1.0], n))
    scaled = (k / (k - 1)) * (D @ rm.matrix() @ D)
    big = np.kron(scaled.real, np.eye(k))
    # kron index (2v + s) k + i  ->  interleaved index 2(vk + i) + s
    perm = np.empty(2 * n * k, dtype=int)
    for v in range(n):
        for s in range(2):
            for i in range(k):
                perm[2 * (v * k + i) + s] = (2 * v + s) * k + i
    sigma = big[np.ix_(perm, perm)]
    gc = GaussianCovariance(n, k, sigma, symplectic_form(n * k))
    if check:
        margin = gc.validity_margin()
        if margin < -tol:
            raise ValidityViolation(margin)
    return gc


def rounded_potential_edge(
    gc: GaussianCovariance,
    v: int,
    w: int,
    weight: float,
    c_pot: float,
    mc: McConfig = McConfig(),
) -> McEstimate:
    """Expected value of w (c_pot + x_v . x_w) after projecting the sampled positions."""
    t = float(np.clip(gc.correlation(v, w), -1.0, 1.0))
    est = bov.h(gc.k, t, mc.samples, mc.seed)
    return McEstimate(weight * (c_pot + est.mean), abs(weight) * est.std_err, est.samples)


def _closed_form_kinetic(cov: np.ndarray, k: int, xp_tol: float) -> float:
    vx = np.diag(cov)[:k]
    vp = np.diag(cov)[k:]
    off = cov.copy()
    np.fill_diagonal(off, 0.0)
    if np.abs(off).max(initial=0.0) > xp_tol:
        raise ValueError("closed form needs uncorrelated coordinates (K_v = 0); use mode='wick'")
    # sum_{i<j} (vx_i vp_j + vx_j vp_i) - C(k,2)/2
    total = vx.sum() * vp.sum() - float(vx @ vp)
    return float(total - comb(k, 2) / 2)


def _mc_kinetic(cov: np.ndarray, k: int, mc: McConfig) -> McEstimate:
    F = psd_factor(cov, tol=1e-9)
    stats = RunningStats()
    for c, size in chunk_sizes(mc.samples):
        rng = substream(mc.seed, c)
        z = rng.standard_normal((size, F.shape[1])) @ F.T
        x, p = z[:, :k], z[:, k:]
        # sum_{i<j} (x_i p_j - x_j p_i)^2 = |x|^2 |p|^2 - (x . p)^2
        val = (x * x).sum(1) * (p * p).sum(1) - (x * p).sum(1) ** 2
        stats.add_batch(val - comb(k, 2) / 2)
    return stats.estimate()


def rounded_kinetic_vertex(
    gc: GaussianCovariance,
    v: int,
    a: float,
    mode: str = "closed_form",
    mc: McConfig = McConfig(),
    xp_tol: float = 1e-9,
):
    """a times the expected kinetic energy of vertex v in the Gaussian state.

    Returns a float for ``closed_form`` and ``wick`` and an McEstimate for ``mc``.
    """
    if mode not in KINETIC_MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {KINETIC_MODES}")
    cov = gc.vertex_marginal(v)
    k = gc.k
    if mode == "closed_form":
        return a * _closed_form_kinetic(cov, k, xp_tol)
    if mode == "wick":
        return a * float(wick_expectation(kinetic_weyl_symbol(k), MomentSpec.centered(cov)))
    est = _mc_kinetic(cov, k, mc)
    return McEstimate(a * est.mean, abs(a) * est.std_err, est.samples)


@dataclass
class RoundingReport:
    k: int
    sdp_value: float
    rounded_value: float
    rounded_std_err: float
    validity_margin: float
    vertices: list
    edges: list
    kinetic_mode: str
    ratios_reported: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "sdp_value": self.sdp_value,
            "rounded_value": self.rounded_value,
            "rounded_std_err": self.rounded_std_err,
            "validity_margin": self.validity_margin,
            "kinetic_mode": self.kinetic_mode,
            "ratios_reported": self.ratios_reported,
            "vertices": self.vertices,
            "edges": self.edges,
        }


def _ratio(num: float, den: float, enabled: bool) -> Optional[float]:
    if not enabled or abs(den) < 1e-12:
        return None
    return float(num / den)


def rounded_value(
    inst: RotorInstance,
    rm: ReducedMoment,
    mc: McConfig = McConfig(),
    kinetic_mode: Optional[str] = None,
) -> RoundingReport:
    """Per-term and total energies of the rounded state next to the SDP values.

    ``kinetic_mode`` defaults to the closed form when every K_v vanishes and to
    the Wick expansion otherwise.  Ratios are omitted for instances with
    negative edge weights.
    """
    gc = build_gaussian(rm)
    if kinetic_mode is None:
        kinetic_mode = "closed_form" if np.all(rm.K == 0) else "wick"
    ratios = not inst.has_negative_weights
    sdp_kin = rm.kinetic_terms(inst)
    sdp_pot = rm.potential_terms(inst)
    vertices = []
    total = 0.0
    var = 0.0
    for v in range(inst.n):
        val = rounded_kinetic_vertex(gc, v, inst.a, kinetic_mode, McConfig(mc.samples, mc.seed + 1 + v))
        se = 0.0
        if isinstance(val, McEstimate):
            val, se = val.mean, val.std_err
        total += val
        var += se**2
        vertices.append(
            {"v": v, "sdp": float(sdp_kin[v]), "rounded": float(val), "std_err": se,
             "ratio": _ratio(val, sdp_kin[v], ratios)}
        )
    edges = []
    if inst.edges:
        ts = np.array([np.clip(gc.correlation(u, w), -1.0, 1.0) for u, w, _ in inst.edges])
        hm, hs = bov.h_curve(inst.k, ts, mc.samples, mc.seed)
        for idx, (u, w, wt) in enumerate(inst.edges):
            val = inst.b * wt * (inst.c_pot + hm[idx])
            se = abs(inst.b * wt) * hs[idx]
            total += val
            var += se**2
            edges.append(
                {"u": u, "v": w, "w": wt, "t": float(ts[idx]), "sdp": float(sdp_pot[idx]),
                 "rounded": float(val), "std_err": float(se), "ratio": _ratio(val, sdp_pot[idx], ratios)}
            )
    return RoundingReport(
        inst.k,
        rm.objective(inst),
        float(total),
        float(np.sqrt(var)),
        gc.validity_margin(),
        vertices,
        edges,
        kinetic_mode,
        ratios,
    )


def alpha(k: int, mc: McConfig = McConfig(), grid_size: int = 201, c_pot: float = 2.0) -> dict:
    """alpha_k = max(alpha_BOV(k), k/(k-1)) with the Monte Carlo error of the first term."""
    if k < 2:
        raise ValueError("k must be >= 2")
    est = bov.alpha_bov(k, grid_size, mc.samples, mc.seed, c_pot)
    k_ratio = k / (k - 1)
    return {
        "k": k,
        "alpha_bov_k": est.alpha,
        "alpha_bov_std_err": est.std_err,
        "alpha_bov_t_star": est.t_star,
        "k_ratio": k_ratio,
        "alpha_k": max(est.alpha, k_ratio),
    }
