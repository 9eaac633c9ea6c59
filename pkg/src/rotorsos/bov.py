"""Rank-k Grothendieck relaxation and Gaussian rounding of unit-vector problems.

The classical problem minimizes ``sum_edges w (c + x_v . x_w)`` over unit
vectors in R^k.  Its level-1 relaxation replaces the Gram matrix by any PSD
matrix with unit diagonal.  Rounding samples Gaussian vectors with that
correlation and projects them to the sphere; the expected projected inner
product at correlation t is ``h(k, t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaln

from .instance import RotorInstance
from .montecarlo import DEFAULT_CHUNK, McEstimate, RunningStats, chunk_sizes, substream
from .sdpcore import SdpProblem, entry_matrix, psd_factor, solve

__all__ = [
    "BovSolution",
    "build_bov",
    "solve_bov",
    "chi_mean",
    "mismatch",
    "mismatch_mc",
    "h",
    "h_curve",
    "g",
    "AlphaEstimate",
    "alpha_bov",
    "round_bov",
    "round_bov_mean",
]

Edge = tuple[int, int, float]


def _graph(graph, n: Optional[int]) -> tuple[int, list[Edge]]:
    if isinstance(graph, RotorInstance):
        return graph.n, list(graph.edges)
    edges = [(int(e[0]), int(e[1]), float(e[2]) if len(e) > 2 else 1.0) for e in graph]
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    for u, v, _ in edges:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) outside 0..{n - 1}")
    return n, edges


@dataclass
class BovSolution:
    """Unit-diagonal PSD matrix M' with its objective sum_edges w (c + M'_vw)."""

    M: np.ndarray
    value: float
    edges: list = field(default_factory=list)
    c_pot: float = 2.0

    @property
    def n(self) -> int:
        return self.M.shape[0]

    def edge_value(self, M: Optional[np.ndarray] = None) -> float:
        M = self.M if M is None else M
        return float(sum(w * (self.c_pot + M[u, v]) for u, v, w in self.edges))


def build_bov(graph, c_pot: float = 2.0, n: Optional[int] = None) -> SdpProblem:
    """min sum_edges w (c_pot + M_uv)  s.t.  M_vv = 1, M PSD (real symmetric)."""
    n, edges = _graph(graph, n)
    C = np.zeros((max(n, 1), max(n, 1)))
    for u, v, w in edges:
        C[u, v] += 0.5 * w
        C[v, u] += 0.5 * w
    cons = [(entry_matrix(C.shape[0], v, v, dtype=float), 1.0) for v in range(C.shape[0])]
    offset = c_pot * sum(w for _, _, w in edges)
    return SdpProblem(C, cons, offset)


def solve_bov(graph, c_pot: float = 2.0, n: Optional[int] = None, **solver_opts) -> BovSolution:
    n_, edges = _graph(graph, n)
    if isinstance(graph, RotorInstance):
        c_pot = graph.c_pot
    sol = solve(build_bov(edges, c_pot, n_), **solver_opts)
    M = np.real(sol.X)
    return BovSolution(M, sol.primal_value, edges, c_pot)


# ---------------------------------------------------------------------------
# large-k limits
# ---------------------------------------------------------------------------

def chi_mean(k: int) -> float:
    """E|x| for x ~ N(0, I_k / k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return float(np.sqrt(2.0 / k) * np.exp(gammaln((k + 1) / 2) - gammaln(k / 2)))


def mismatch(k: int) -> float:
    """E|x/|x| - x|^2 = 2 (1 - E|x|) for x ~ N(0, I_k / k)."""
    return 2.0 * (1.0 - chi_mean(k))


def mismatch_mc(k: int, samples: int, seed: int, chunk: int = DEFAULT_CHUNK) -> McEstimate:
    """Direct sampling estimate of E|x/|x| - x|^2 with x ~ N(0, I_k / k)."""
    stats = RunningStats()
    for c, size in chunk_sizes(samples, chunk):
        rng = substream(seed, c)
        x = rng.standard_normal((size, k)) / np.sqrt(k)
        r = np.linalg.norm(x, axis=1, keepdims=True)
        r[r == 0] = 1.0
        stats.add_batch(((x / r - x) ** 2).sum(axis=1))
    return stats.estimate()


# ---------------------------------------------------------------------------
# expected rounded inner product
# ---------------------------------------------------------------------------

def _check_t(t: np.ndarray) -> None:
    if np.any(np.abs(t) > 1):
        raise ValueError("correlation t must lie in [-1, 1]")


def h_curve(
    k: int, ts: Sequence[float], samples: int, seed: int, chunk: int = DEFAULT_CHUNK
) -> tuple[np.ndarray, np.ndarray]:
    """Estimates of h(k, t) for every t in ``ts`` using common random numbers.

    With x ~ N(0, I_k) and y = t x + s z (s = sqrt(1 - t^2)), rotating so that x
    lies along the first axis shows that the projected inner product only
    depends on |x| (chi_k), the parallel part of z (standard normal) and the
    squared norm of its perpendicular part (chi^2_{k-1}).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    _check_t(ts)
    s = np.sqrt(np.clip(1.0 - ts**2, 0.0, None))
    stats = RunningStats(ts.shape)
    for c, size in chunk_sizes(samples, chunk):
        rng = substream(seed, c)
        R = np.sqrt(rng.chisquare(k, size))
        zpar = rng.standard_normal(size)
        wperp = rng.chisquare(k - 1, size) if k > 1 else np.zeros(size)
        num = ts[None, :] * R[:, None] + s[None, :] * zpar[:, None]
        den = np.sqrt(num**2 + (s**2)[None, :] * wperp[:, None])
        den[den == 0] = 1.0
        stats.add_batch(num / den)
    mean = np.array(stats.mean, dtype=float)
    se = np.array(stats.std_err, dtype=float)
    exact = np.abs(ts) == 1.0
    mean[exact] = np.sign(ts[exact])
    se[exact] = 0.0
    return mean, se


def h(k: int, t: float, samples: int = 100_000, seed: int = 0) -> McEstimate:
    """E[(x/|x|) . (y/|y|)] for (x, y) with covariance [[1, t], [t, 1]] (x) I_k / k."""
    mean, se = h_curve(k, [t], samples, seed)
    return McEstimate(float(mean[0]), float(se[0]), samples)


def g(k: int, t: float, samples: int = 100_000, seed: int = 0, c_pot: float = 2.0) -> McEstimate:
    """Ratio (c_pot + h(k, t)) / (c_pot + t) of rounded to relaxed edge value."""
    if c_pot + t <= 0:
        raise ValueError("c_pot + t must be positive")
    est = h(k, t, samples, seed)
    return McEstimate((c_pot + est.mean) / (c_pot + t), est.std_err / (c_pot + t), samples)


@dataclass
class AlphaEstimate:
    k: int
    alpha: float
    std_err: float
    t_star: float
    ts: np.ndarray
    g: np.ndarray
    g_std_err: np.ndarray
    samples: int
    seed: int


def alpha_bov(
    k: int,
    grid_size: int = 201,
    samples: int = 100_000,
    seed: int = 0,
    c_pot: float = 2.0,
) -> AlphaEstimate:
    """max over t in [-1, 1] of g(k, t): grid maximum refined by a 3-point parabola."""
    ts = np.linspace(-1.0, 1.0, grid_size)
    if np.any(c_pot + ts <= 0):
        raise ValueError("c_pot + t must be positive on the grid")
    hm, hs = h_curve(k, ts, samples, seed)
    gv = (c_pot + hm) / (c_pot + ts)
    gs = hs / (c_pot + ts)
    i = int(np.argmax(gv))
    alpha, t_star, se = float(gv[i]), float(ts[i]), float(gs[i])
    if 0 < i < grid_size - 1:
        y0, y1, y2 = gv[i - 1], gv[i], gv[i + 1]
        denom = y0 - 2 * y1 + y2
        if denom < 0:
            step = ts[1] - ts[0]
            off = 0.5 * (y0 - y2) / denom
            off = float(np.clip(off, -1.0, 1.0))
            t_star = float(ts[i] + off * step)
            alpha = float(y1 - 0.25 * (y0 - y2) * off)
    return AlphaEstimate(k, alpha, se, t_star, ts, gv, gs, samples, seed)


# ---------------------------------------------------------------------------
# rounding
# ---------------------------------------------------------------------------

def round_bov(sol: BovSolution, k: int, seed: int, attempt_limit: int = 100) -> tuple[np.ndarray, float]:
    """Sample y ~ N(0, M' (x) I_k / k), project each y_v to the sphere.

    Returns the (n, k) array of unit vectors and the objective of that assignment.
    """
    F = psd_factor(sol.M, tol=1e-7)
    for attempt in range(attempt_limit):
        rng = substream(seed, attempt)
        Y = F @ rng.standard_normal((F.shape[1], k)) / np.sqrt(k)
        norms = np.linalg.norm(Y, axis=1)
        if np.all(norms > 0):
            U = Y / norms[:, None]
            value = sol.edge_value(U @ U.T)
            return U, value
    raise RuntimeError("rounding kept producing zero vectors")


def round_bov_mean(sol: BovSolution, k: int, samples: int, seed: int) -> McEstimate:
    """Mean rounded objective over ``samples`` independent roundings."""
    F = psd_factor(sol.M, tol=1e-7)
    stats = RunningStats()
    for c, size in chunk_sizes(samples, 4096):
        rng = substream(seed, c)
        Y = np.einsum("vr,srk->svk", F, rng.standard_normal((size, F.shape[1], k))) / np.sqrt(k)
        norms = np.linalg.norm(Y, axis=2, keepdims=True)
        norms[norms == 0] = 1.0
        U = Y / norms
        vals = np.full(size, 0.0)
        for u, v, w in sol.edges:
            vals += w * (sol.c_pot + np.einsum("sk,sk->s", U[:, u], U[:, v]))
        stats.add_batch(vals)
    return stats.estimate()
