"""Exact ground-truth computations for planar (k = 2) rotors.

On the circle every site is spanned by Fourier modes ``e^{i m theta}``.  The
Laplacian is diagonal with eigenvalue m^2 and ``x_v . x_w = cos(theta_v -
theta_w)`` shifts (m_v, m_w) to (m_v +- 1, m_w -+ 1).  Truncating each site to
|m| <= M gives a finite sparse Hamiltonian whose lowest eigenvalue converges
from above as M grows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .bounds import SphericalMoments
from .instance import RotorInstance
from .montecarlo import substream

__all__ = [
    "DimensionOverflow",
    "OracleError",
    "TruncatedHamiltonian",
    "hamiltonian_k2",
    "OracleResult",
    "ground_energy",
    "lowest_eigenvalues",
    "ProductStateResult",
    "product_state_k2",
    "WavefunctionMoments",
    "moments_from_coefficients",
    "random_wavefunction_moments",
    "MAX_DIMENSION",
    "DENSE_LIMIT",
]

MAX_DIMENSION = 2_000_000
DENSE_LIMIT = 1500


class DimensionOverflow(ValueError):
    pass


class OracleError(RuntimeError):
    pass


def _require_k2(inst: RotorInstance) -> None:
    if inst.k != 2:
        raise ValueError(f"the exact oracle handles k = 2 only, got k = {inst.k}")


def _raising(M: int) -> sp.csr_matrix:
    """e^{i theta} on modes -M..M: sends m to m + 1, dropping m = M."""
    d = 2 * M + 1
    return sp.diags(np.ones(d - 1), -1, shape=(d, d), format="csr")


def _site_op(op, v: int, n: int, d: int):
    left = sp.identity(d**v, format="csr")
    right = sp.identity(d ** (n - v - 1), format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


@dataclass
class TruncatedHamiltonian:
    """Sparse Hamiltonian on sites with modes -M..M; basis index sum_v (m_v + M) d^(n-1-v)."""

    instance: RotorInstance
    M: int
    matrix: sp.csr_matrix = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def hamiltonian_k2(inst: RotorInstance, M: int) -> TruncatedHamiltonian:
    _require_k2(inst)
    if M < 1:
        raise ValueError("cutoff M must be >= 1")
    d = 2 * M + 1
    n = inst.n
    if d**n > MAX_DIMENSION:
        raise DimensionOverflow(f"dimension {d}^{n} exceeds {MAX_DIMENSION}")
    m2 = np.arange(-M, M + 1, dtype=float) ** 2
    diag = np.zeros(d**n)
    for v in range(n):
        diag += np.tile(np.repeat(m2, d ** (n - v - 1)), d**v)
    H = sp.diags(inst.a * diag + inst.b * inst.c_pot * inst.total_weight, format="csr")
    S = _raising(M)
    for u, w, wt in inst.edges:
        hop = _site_op(S, u, n, d) @ _site_op(S.T, w, n, d)
        H = H + (0.5 * inst.b * wt) * (hop + hop.T)
    return TruncatedHamiltonian(inst, M, H.tocsr())


def lowest_eigenvalues(H: sp.spmatrix, count: int = 2, tol: float = 1e-12) -> np.ndarray:
    """The ``count`` smallest eigenvalues; dense below DENSE_LIMIT, Lanczos above."""
    dim = H.shape[0]
    count = min(count, dim)
    if dim <= DENSE_LIMIT or count >= dim - 1:
        return eigh(H.toarray(), eigvals_only=True, subset_by_index=[0, count - 1])
    try:
        vals = eigsh(H, k=count, which="SA", tol=tol, maxiter=max(20 * dim, 5000), return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise OracleError(f"Lanczos did not converge: {exc}") from exc
    return np.sort(vals)


@dataclass
class OracleResult:
    ground_energy: float
    gap: float
    M: int
    delta: Optional[float]
    product_energy: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "ground_energy": self.ground_energy,
            "gap": self.gap,
            "truncation": self.M,
            "convergence_delta": self.delta,
            "product_energy": self.product_energy,
        }


def ground_energy(h: TruncatedHamiltonian, check_convergence: bool = True) -> OracleResult:
    """Lowest eigenvalue and gap; ``delta`` compares against the cutoff M - 2."""
    vals = lowest_eigenvalues(h.matrix, 2)
    e0 = float(vals[0])
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else 0.0
    delta = None
    if check_convergence and h.M > 2:
        smaller = hamiltonian_k2(h.instance, h.M - 2)
        delta = abs(e0 - float(lowest_eigenvalues(smaller.matrix, 1)[0]))
    return OracleResult(e0, gap, h.M, delta)


# ---------------------------------------------------------------------------
# product states
# ---------------------------------------------------------------------------

@dataclass
class ProductStateResult:
    """Best product-state energy found (an upper bound on the product optimum)."""

    value: float
    states: np.ndarray
    converged: bool
    history: list
    restarts: int

    def means(self) -> np.ndarray:
        return np.array([_mean(c) for c in self.states])


def _mean(c: np.ndarray) -> complex:
    """<e^{i theta}> = sum_m conj(c_{m+1}) c_m."""
    return complex(np.vdot(c[1:], c[:-1]))


def _energy(inst: RotorInstance, m2: np.ndarray, states: np.ndarray) -> float:
    mu = [_mean(c) for c in states]
    kin = inst.a * sum(float(np.real(np.vdot(c, m2 * c))) for c in states)
    pot = inst.b * sum(wt * (inst.c_pot + (mu[u] * np.conj(mu[w])).real) for u, w, wt in inst.edges)
    return float(kin + pot)


def product_state_k2(
    inst: RotorInstance,
    M: int = 16,
    restarts: int = 32,
    seed: int = 0,
    max_sweeps: int = 300,
    tol: float = 1e-11,
) -> ProductStateResult:
    """Alternating single-site minimization over product states, best of ``restarts`` starts.

    Each site solves the (2M+1)-dimensional eigenproblem for
    ``a m^2 + b sum_w w Re(conj(mu_w) e^{i theta})`` with neighbor means fixed,
    so the energy never increases across sweeps.
    """
    _require_k2(inst)
    d = 2 * M + 1
    m2 = np.arange(-M, M + 1, dtype=float) ** 2
    S = np.diag(np.ones(d - 1), -1)
    nbrs = [[] for _ in range(inst.n)]
    for u, w, wt in inst.edges:
        nbrs[u].append((w, wt))
        nbrs[w].append((u, wt))
    best: Optional[ProductStateResult] = None
    for r in range(restarts):
        rng = substream(seed, r)
        states = rng.standard_normal((inst.n, d)) + 1j * rng.standard_normal((inst.n, d))
        states /= np.linalg.norm(states, axis=1, keepdims=True)
        history = [_energy(inst, m2, states)]
        converged = False
        for _ in range(max_sweeps):
            for v in range(inst.n):
                field_ = sum((wt * _mean(states[w]) for w, wt in nbrs[v]), 0j)
                Hv = inst.a * np.diag(m2) + 0.5 * inst.b * (np.conj(field_) * S + field_ * S.T)
                _, vecs = np.linalg.eigh(Hv)
                states[v] = vecs[:, 0]
            history.append(_energy(inst, m2, states))
            if history[-2] - history[-1] < tol:
                converged = True
                break
        cand = ProductStateResult(history[-1], states.copy(), converged, history, restarts)
        if best is None or cand.value < best.value:
            best = cand
    return best


# ---------------------------------------------------------------------------
# random wavefunctions
# ---------------------------------------------------------------------------

@dataclass
class WavefunctionMoments:
    """Kinetic energy, spherical mean and rotated certificate moments of one k = 2 state."""

    laplacian: float
    mu: np.ndarray
    spherical: SphericalMoments
    coefficients: np.ndarray = field(repr=False)

    @property
    def t(self) -> float:
        return float(np.hypot(*self.mu))


def _shift_expect(c: np.ndarray, s: int, weights: Optional[np.ndarray] = None) -> complex:
    """<f, e^{i s theta} g> where g has coefficients weights * c."""
    g = c if weights is None else weights * c
    if s == 0:
        return complex(np.vdot(c, g))
    if s > 0:
        return complex(np.vdot(c[s:], g[:-s]))
    return complex(np.vdot(c[:s], g[-s:]))


def moments_from_coefficients(c: np.ndarray) -> WavefunctionMoments:
    """Moments of f = sum_m c_m e^{i m theta} / sqrt(2 pi), modes m = -M..M (normalized here)."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 1 or len(c) % 2 != 1:
        raise ValueError("coefficients must be a vector of odd length 2M + 1")
    c = c / np.linalg.norm(c)
    M = len(c) // 2
    m = np.arange(-M, M + 1, dtype=float)
    s1 = _shift_expect(c, 1)
    mu = np.array([s1.real, s1.imag])
    # rotate so the mean points along the first axis
    phase = np.exp(1j * m * np.angle(s1)) if abs(s1) > 0 else np.ones_like(m)
    cr = c * phase
    s2 = _shift_expect(cr, 2)
    lap = float(np.sum(m**2 * np.abs(c) ** 2))
    # x_2 = sin theta, vhat_12 = -i d/dtheta acts as m
    t1 = _shift_expect(cr, 1, m)
    tm1 = _shift_expect(cr, -1, m)
    sph = SphericalMoments(
        x1_sq=float(0.5 * (1 + s2.real)),
        x_sq_rest=float(0.5 * (1 - s2.real)),
        xv_rest=complex((t1 - tm1) / 2j),
        v_sq_rest=lap,
        laplacian=lap,
    )
    return WavefunctionMoments(lap, mu, sph, c)


def random_wavefunction_moments(k: int = 2, M: int = 8, seed: int = 0) -> WavefunctionMoments:
    """Moments of a random state with modes |m| <= M.

    Coefficients are complex Gaussians with a random envelope width so that
    both spread-out and sharply peaked states are drawn.
    """
    if k != 2:
        raise NotImplementedError("random wavefunctions are available for k = 2 only")
    if M < 1:
        raise ValueError("cutoff M must be >= 1")
    rng = substream(seed, 0)
    m = np.arange(-M, M + 1, dtype=float)
    width = np.exp(rng.uniform(np.log(0.3), np.log(2.0 * M)))
    env = np.exp(-0.5 * ((m - rng.uniform(-M / 2, M / 2)) / width) ** 2)
    c = env * (rng.standard_normal(len(m)) + 1j * rng.standard_normal(len(m)))
    if not np.any(c):
        c[M] = 1.0
    return moments_from_coefficients(c)
