"""Level-1 moment relaxation of the quantum rotor Hamiltonian.

The full relaxation is a Hermitian moment matrix indexed by the constant
``1``, the coordinates ``x_{v,i}`` and the symmetrised momenta ``q_{v,i}``.
Its entries are ``M[a, b] = E~[a b]``; the operator relations between x and q
become linear equations on real and imaginary parts.

The rotation group acts on each site, and averaging over it collapses the
matrix to ``1 (+) M' (x) I_k`` where ``M'`` is 2n x 2n with rows ordered
``(x_0, q_0, x_1, q_1, ...)``.  Its diagonal 2x2 blocks are
``[[1/k, K_v - i(k-1)/(2k)], [K_v + i(k-1)/(2k), L_v]]`` and the cross blocks
are real.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .instance import RotorInstance
from .sdpcore import (
    DEFAULT_GAP_TOL,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    SdpProblem,
    SdpSolution,
    entry_matrix,
    min_eig,
    solve,
)

__all__ = [
    "FullMoment",
    "ReducedMoment",
    "build_full",
    "build_reduced",
    "lift",
    "symmetrize",
    "extract_reduced",
    "solve_full",
    "solve_reduced",
    "uniform_point",
    "full_index",
    "xq_imag",
]


def xq_imag(k: int) -> float:
    """Imaginary part of E~[x_i q_i] for each i (so the sum over i is -(k-1)/2)."""
    return -(k - 1) / (2 * k)


def full_index(k: int, v: int, kind: str, i: int) -> int:
    """Row of x_{v,i} (kind "x") or q_{v,i} (kind "q"), 0-based i; row 0 is the constant."""
    base = 1 + 2 * k * v
    if kind == "x":
        return base + i
    if kind == "q":
        return base + k + i
    raise ValueError(f"kind must be 'x' or 'q', got {kind!r}")


# ---------------------------------------------------------------------------
# moment containers
# ---------------------------------------------------------------------------

@dataclass
class FullMoment:
    """Hermitian moment matrix of size 1 + 2nk."""

    k: int
    n: int
    H: np.ndarray

    def objective(self, inst: RotorInstance) -> float:
        k, H = self.k, self.H
        total = 0.0
        for v in range(self.n):
            qq = sum(H[full_index(k, v, "q", i), full_index(k, v, "q", i)].real for i in range(k))
            total += inst.a * (-(k - 1) ** 2 / 4 + qq)
        for v, w, wt in inst.edges:
            xx = sum(H[full_index(k, v, "x", i), full_index(k, w, "x", i)].real for i in range(k))
            total += inst.b * wt * (inst.c_pot + xx)
        return float(total)

    def min_eigenvalue(self) -> float:
        return min_eig(self.H)


@dataclass
class ReducedMoment:
    """Symmetry-reduced moments: K_v, L_v per vertex and real 2x2 blocks per vertex pair.

    ``B[(v, w)]`` (v < w) is ``[[E~x_v x_w, E~x_v q_w], [E~q_v x_w, E~q_v q_w]]`` for a
    single coordinate index.
    """

    k: int
    K: np.ndarray
    L: np.ndarray
    B: dict = field(default_factory=dict)

    def __post_init__(self):
        self.K = np.asarray(self.K, dtype=float).reshape(-1)
        self.L = np.asarray(self.L, dtype=float).reshape(-1)
        if self.K.shape != self.L.shape:
            raise ValueError("K and L must have one entry per vertex")
        clean = {}
        for (v, w), blk in self.B.items():
            blk = np.asarray(blk, dtype=float).reshape(2, 2)
            if v > w:
                v, w, blk = w, v, blk.T
            if v == w:
                raise ValueError("cross blocks need distinct vertices")
            clean[(v, w)] = blk
        self.B = clean

    @property
    def n(self) -> int:
        return self.K.size

    def block(self, v: int, w: int) -> np.ndarray:
        if v == w:
            raise ValueError("use the diagonal entries for v == w")
        if v < w:
            return self.B.get((v, w), np.zeros((2, 2)))
        return self.B.get((w, v), np.zeros((2, 2))).T

    def matrix(self) -> np.ndarray:
        """The Hermitian 2n x 2n matrix M'."""
        n, k = self.n, self.k
        M = np.zeros((2 * n, 2 * n), dtype=complex)
        im = xq_imag(k)
        for v in range(n):
            M[2 * v, 2 * v] = 1.0 / k
            M[2 * v, 2 * v + 1] = self.K[v] + 1j * im
            M[2 * v + 1, 2 * v] = self.K[v] - 1j * im
            M[2 * v + 1, 2 * v + 1] = self.L[v]
        for (v, w), blk in self.B.items():
            M[2 * v:2 * v + 2, 2 * w:2 * w + 2] = blk
            M[2 * w:2 * w + 2, 2 * v:2 * v + 2] = blk.T
        return M

    @classmethod
    def from_matrix(cls, M: np.ndarray, k: int) -> "ReducedMoment":
        """Read K, L and cross blocks from M' (fixed entries are not checked here)."""
        n = M.shape[0] // 2
        K = np.array([M[2 * v, 2 * v + 1].real for v in range(n)])
        L = np.array([M[2 * v + 1, 2 * v + 1].real for v in range(n)])
        B = {}
        for v in range(n):
            for w in range(v + 1, n):
                blk = M[2 * v:2 * v + 2, 2 * w:2 * w + 2].real
                if np.any(blk != 0):
                    B[(v, w)] = blk.copy()
        return cls(k, K, L, B)

    def min_eigenvalue(self) -> float:
        return min_eig(self.matrix())

    def is_feasible(self, tol: float = 1e-9) -> bool:
        return self.min_eigenvalue() >= -tol

    def correlation(self, v: int, w: int) -> float:
        """Normalized x-sector correlation t_vw = k E~[x_{v,1} x_{w,1}]."""
        return self.k * float(self.block(v, w)[0, 0])

    def kinetic_terms(self, inst: RotorInstance) -> np.ndarray:
        """Per-vertex SDP kinetic values a(-(k-1)^2/4 + k L_v)."""
        k = self.k
        return inst.a * (-(k - 1) ** 2 / 4 + k * self.L)

    def potential_terms(self, inst: RotorInstance) -> np.ndarray:
        """Per-edge SDP potential values b w (c + k E~[x_v x_w])."""
        return np.array(
            [inst.b * w * (inst.c_pot + self.correlation(u, v)) for u, v, w in inst.edges], dtype=float
        )

    def objective(self, inst: RotorInstance) -> float:
        return float(self.kinetic_terms(inst).sum() + self.potential_terms(inst).sum())


def uniform_point(inst: RotorInstance) -> ReducedMoment:
    """A strictly feasible point: K = 0, L = (k-1)^2/(4k) + 1, no cross correlations."""
    k = inst.k
    return ReducedMoment(k, np.zeros(inst.n), np.full(inst.n, (k - 1) ** 2 / (4 * k) + 1.0))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

class _Collector:
    def __init__(self, dim: int):
        self.dim = dim
        self.items: list[tuple[sp.csr_matrix, float]] = []

    def entry(self, a, b, part="re"):
        return entry_matrix(self.dim, a, b, part)

    def add(self, A, rhs):
        self.items.append((sp.csr_matrix(A), float(rhs)))


def build_full(inst: RotorInstance) -> SdpProblem:
    """Full level-1 relaxation over the (1 + 2nk)-dimensional Hermitian moment matrix."""
    k, n = inst.k, inst.n
    D = 1 + 2 * n * k
    col = _Collector(D)
    X = lambda v, i: full_index(k, v, "x", i)  # noqa: E731
    Q = lambda v, i: full_index(k, v, "q", i)  # noqa: E731

    col.add(col.entry(0, 0), 1.0)
    for r in range(1, D):
        col.add(col.entry(0, r, "im"), 0.0)
    # operators on different sites commute
    for v in range(n):
        rows_v = list(range(1 + 2 * k * v, 1 + 2 * k * (v + 1)))
        for w in range(v + 1, n):
            for r in rows_v:
                for s in range(1 + 2 * k * w, 1 + 2 * k * (w + 1)):
                    col.add(col.entry(r, s, "im"), 0.0)
    for v in range(n):
        for i in range(k):
            for j in range(i + 1, k):
                # coordinates commute
                col.add(col.entry(X(v, i), X(v, j), "im"), 0.0)
                # [q_i, q_j] = i (x_i q_j - x_j q_i)
                A = 2 * col.entry(Q(v, i), Q(v, j), "im") - col.entry(X(v, i), Q(v, j)) + col.entry(X(v, j), Q(v, i))
                col.add(A, 0.0)
                A = col.entry(X(v, i), Q(v, j), "im") - col.entry(X(v, j), Q(v, i), "im")
                col.add(A, 0.0)
        # [q_j, x_i] = i (delta_ij - x_i x_j)
        for i in range(k):
            for j in range(k):
                A = col.entry(X(v, i), Q(v, j), "im") - 0.5 * col.entry(X(v, i), X(v, j))
                col.add(A, -0.5 if i == j else 0.0)
        # sum_i x_i^2 = 1 and sum_i x_i q_i = -i(k-1)/2
        col.add(sum(col.entry(X(v, i), X(v, i)) for i in range(k)), 1.0)
        col.add(sum(col.entry(X(v, i), Q(v, i)) for i in range(k)), 0.0)
        col.add(sum(col.entry(X(v, i), Q(v, i), "im") for i in range(k)), -(k - 1) / 2)

    C = np.zeros((D, D), dtype=complex)
    for v in range(n):
        for i in range(k):
            C[Q(v, i), Q(v, i)] += inst.a
    for v, w, wt in inst.edges:
        for i in range(k):
            C[X(v, i), X(w, i)] += 0.5 * inst.b * wt
            C[X(w, i), X(v, i)] += 0.5 * inst.b * wt
    offset = -inst.a * n * (k - 1) ** 2 / 4 + inst.b * inst.c_pot * inst.total_weight
    return SdpProblem(C, col.items, offset)


def build_reduced(inst: RotorInstance, time_reversal: bool = True) -> SdpProblem:
    """Symmetry-reduced relaxation over the 2n x 2n Hermitian matrix M'.

    With ``time_reversal`` the x-q real parts K_v are pinned to zero; this does
    not change the optimum because complex conjugation of wavefunctions maps
    feasible points to feasible points with K_v negated and the same objective.
    """
    k, n = inst.k, inst.n
    D = 2 * n
    col = _Collector(D)
    for v in range(n):
        x, q = 2 * v, 2 * v + 1
        col.add(col.entry(x, x), 1.0 / k)
        col.add(col.entry(x, q, "im"), xq_imag(k))
        if time_reversal:
            col.add(col.entry(x, q), 0.0)
        for w in range(v + 1, n):
            for r in (2 * v, 2 * v + 1):
                for s in (2 * w, 2 * w + 1):
                    col.add(col.entry(r, s, "im"), 0.0)
    C = np.zeros((D, D), dtype=complex)
    for v in range(n):
        C[2 * v + 1, 2 * v + 1] += inst.a * k
    for v, w, wt in inst.edges:
        C[2 * v, 2 * w] += 0.5 * inst.b * wt * k
        C[2 * w, 2 * v] += 0.5 * inst.b * wt * k
    offset = -inst.a * n * (k - 1) ** 2 / 4 + inst.b * inst.c_pot * inst.total_weight
    return SdpProblem(C, col.items, offset)


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def lift(rm: ReducedMoment, check: bool = True, tol: float = 1e-9) -> FullMoment:
    """1 (+) M' (x) I_k, in the row order used by build_full."""
    Mp = rm.matrix()
    if check and min_eig(Mp) < -tol:
        raise ValueError(f"reduced moment is not PSD (min eigenvalue {min_eig(Mp):.3g})")
    k, n = rm.k, rm.n
    H = np.zeros((1 + 2 * n * k, 1 + 2 * n * k), dtype=complex)
    H[0, 0] = 1.0
    H[1:, 1:] = np.kron(Mp, np.eye(k))
    return FullMoment(k, n, H)


def symmetrize(fm: FullMoment) -> ReducedMoment:
    """Average over the rotation group: each k x k sub-block becomes (trace / k) I."""
    k, n = fm.k, fm.n
    body = fm.H[1:, 1:].reshape(2 * n, k, 2 * n, k)
    Mp = np.einsum("aibi->ab", body) / k
    rm = ReducedMoment.from_matrix(Mp, k)
    return rm


def extract_reduced(
    X: np.ndarray, inst: RotorInstance, time_reversal: bool = True, psd_tol: float = 0.0
) -> ReducedMoment:
    """ReducedMoment from a numerical solution, repaired to be exactly feasible.

    Fixed entries are reset to their exact values, and if the result has a
    negative eigenvalue it is moved toward the strictly feasible uniform point
    by the smallest convex combination that restores PSD-ness.
    """
    rm = ReducedMoment.from_matrix(np.asarray(X), inst.k)
    if time_reversal:
        rm.K = np.zeros_like(rm.K)
    if rm.min_eigenvalue() >= psd_tol:
        return rm
    u = uniform_point(inst)
    Mr, Mu = rm.matrix(), u.matrix()
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if min_eig((1 - mid) * Mr + mid * Mu) >= psd_tol:
            hi = mid
        else:
            lo = mid
    return ReducedMoment.from_matrix((1 - hi) * Mr + hi * Mu, inst.k)


def solve_reduced(
    inst: RotorInstance,
    time_reversal: bool = True,
    tol: float = DEFAULT_TOL,
    gap_tol: float = DEFAULT_GAP_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[SdpSolution, ReducedMoment]:
    sol = solve(build_reduced(inst, time_reversal), tol=tol, gap_tol=gap_tol, max_iter=max_iter)
    return sol, extract_reduced(sol.X, inst, time_reversal)


def solve_full(
    inst: RotorInstance,
    tol: float = DEFAULT_TOL,
    gap_tol: float = DEFAULT_GAP_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[SdpSolution, FullMoment]:
    sol = solve(build_full(inst), tol=tol, gap_tol=gap_tol, max_iter=max_iter)
    return sol, FullMoment(inst.k, inst.n, sol.X)
