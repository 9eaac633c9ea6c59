"""A small dense semidefinite-programming solver.

Problems have the standard primal form

    minimize  <C, X> + offset   subject to   <A_i, X> = b_i,  X >= 0,

with ``<A, X> = Re tr(A^H X)``.  ``C`` and the ``A_i`` may be real symmetric
or complex Hermitian; complex problems are solved through the real embedding
and mapped back.  Constraint matrices may be dense arrays or scipy sparse
matrices, and they are kept as coordinate triples internally.

The solver is an infeasible-start primal-dual interior point method using the
HKM search direction with a Mehrotra predictor-corrector step.  Linearly
dependent constraints are removed first; inconsistent ones are reported as
infeasible together with a certificate.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional, TextIO, Union

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

__all__ = [
    "SdpProblem",
    "SdpSolution",
    "SdpError",
    "NotConverged",
    "Infeasible",
    "DimensionMismatch",
    "IndefiniteMatrix",
    "solve",
    "real_embedding",
    "hermitian_from_embedding",
    "min_eig",
    "cholesky_psd",
    "psd_factor",
    "entry_matrix",
    "dump_problem",
    "load_problem",
    "dump_solution",
    "load_solution",
]

DEFAULT_TOL = 1e-7
DEFAULT_GAP_TOL = 1e-6
DEFAULT_MAX_ITER = 200000

Matrix = Union[np.ndarray, sp.spmatrix]


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class SdpError(Exception):
    """Base class for solver failures."""


class DimensionMismatch(SdpError, ValueError):
    pass


class NotConverged(SdpError):
    """Raised when tolerances are not met; ``solution`` holds the best iterate."""

    def __init__(self, message: str, solution: "SdpSolution"):
        super().__init__(message)
        self.solution = solution


class Infeasible(SdpError):
    """``kind`` is ``"primal"`` or ``"dual"``.

    For primal infeasibility the certificate is a vector y with
    ``-sum_i y_i A_i >= 0`` and ``b . y > 0``; for dual infeasibility it is a
    matrix X >= 0 with ``A(X) = 0`` and ``<C, X> < 0``.
    """

    def __init__(self, message: str, kind: str, certificate):
        super().__init__(message)
        self.kind = kind
        self.certificate = certificate


class IndefiniteMatrix(ValueError):
    pass


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass
class SdpProblem:
    """min <C, X> + offset  s.t.  <A_i, X> = b_i,  X PSD."""

    C: np.ndarray
    constraints: list = field(default_factory=list)
    offset: float = 0.0

    def __post_init__(self):
        self.C = np.asarray(self.C)
        if self.C.ndim != 2 or self.C.shape[0] != self.C.shape[1]:
            raise DimensionMismatch(f"objective must be square, got {self.C.shape}")
        if not np.allclose(self.C, self.C.conj().T, atol=1e-12):
            raise ValueError("objective matrix is not Hermitian")
        cons = list(self.constraints)
        self.constraints = []
        for A, b in cons:
            self.add_constraint(A, b)

    @property
    def dimension(self) -> int:
        return self.C.shape[0]

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.C) or any(
            np.iscomplexobj(A.data if sp.issparse(A) else A) for A, _ in self.constraints
        )

    def add_constraint(self, A: Matrix, b: float) -> None:
        if A.shape != self.C.shape:
            raise DimensionMismatch(f"constraint of shape {A.shape} for a {self.C.shape} problem")
        A = sp.csr_matrix(A) if sp.issparse(A) else np.asarray(A)
        diff = A - A.conj().T
        err = abs(diff).max() if diff.size else 0.0
        if err > 1e-12:
            raise ValueError("constraint matrix is not Hermitian")
        self.constraints.append((A, float(b)))

    @property
    def b(self) -> np.ndarray:
        return np.array([bi for _, bi in self.constraints], dtype=float)

    def constraint_values(self, X: np.ndarray) -> np.ndarray:
        return np.array([_inner(A, X) for A, _ in self.constraints], dtype=float)

    def objective_value(self, X: np.ndarray) -> float:
        return float(np.real(np.vdot(self.C, X))) + self.offset


def _inner(A: Matrix, X: np.ndarray) -> float:
    if sp.issparse(A):
        coo = A.tocoo()
        return float(np.real(np.sum(np.conj(coo.data) * X[coo.row, coo.col])))
    return float(np.real(np.vdot(A, X)))


@dataclass
class SdpSolution:
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    primal_value: float
    dual_value: float
    residuals: dict
    iterations: int = 0
    status: str = "optimal"

    @property
    def value(self) -> float:
        return self.primal_value


# ---------------------------------------------------------------------------
# linear algebra utilities
# ---------------------------------------------------------------------------

def real_embedding(H: np.ndarray) -> np.ndarray:
    """[[Re H, -Im H], [Im H, Re H]] for a Hermitian H."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatch("expected a square matrix")
    if not np.allclose(H, H.conj().T, atol=1e-12):
        raise ValueError("input is not Hermitian")
    R, I = H.real, H.imag
    return np.block([[R, -I], [I, R]])


def hermitian_from_embedding(Y: np.ndarray) -> np.ndarray:
    """Project a real 2m x 2m symmetric matrix onto embedded Hermitian form and decode it."""
    m = Y.shape[0] // 2
    Y11, Y12, Y21, Y22 = Y[:m, :m], Y[:m, m:], Y[m:, :m], Y[m:, m:]
    H = 0.5 * (Y11 + Y22) + 0.5j * (Y21 - Y12)
    return 0.5 * (H + H.conj().T)


def min_eig(M: np.ndarray) -> float:
    M = np.asarray(M)
    return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])


def cholesky_psd(M: np.ndarray, shift_tol: float = 1e-10) -> np.ndarray:
    """Lower factor L with L L^H = M + s I for the smallest tried shift s <= shift_tol."""
    M = 0.5 * (np.asarray(M) + np.asarray(M).conj().T)
    n = M.shape[0]
    shifts = [0.0] + [shift_tol * 10.0**e for e in range(-6, 1)]
    for s in shifts:
        try:
            return np.linalg.cholesky(M + s * np.eye(n))
        except np.linalg.LinAlgError:
            continue
    raise IndefiniteMatrix(f"matrix is indefinite beyond shift {shift_tol:g} (min eig {min_eig(M):.3g})")


def psd_factor(M: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Factor F with F F^H = M (up to clipping eigenvalues in [-tol, 0])."""
    M = 0.5 * (np.asarray(M) + np.asarray(M).conj().T)
    w, V = np.linalg.eigh(M)
    if w.size and w[0] < -tol * max(1.0, abs(w[-1])):
        raise IndefiniteMatrix(f"min eigenvalue {w[0]:.3g} below -{tol:g}")
    return V * np.sqrt(np.clip(w, 0.0, None))


def entry_matrix(dim: int, a: int, b: int, part: str = "re", dtype=complex) -> sp.csr_matrix:
    """Hermitian A with <A, X> = Re X[a, b] (part="re") or Im X[a, b] (part="im")."""
    if part == "re":
        vals = [1.0] if a == b else [0.5, 0.5]
    elif part == "im":
        if a == b:
            raise ValueError("diagonal entries of a Hermitian matrix are real")
        # Re tr(A^H X) with A_ab = i/2, A_ba = -i/2 gives Im X_ab
        vals = [0.5j, -0.5j]
        dtype = complex
    else:
        raise ValueError(f"part must be 're' or 'im', got {part!r}")
    rows, cols = ([a], [b]) if a == b else ([a, b], [b, a])
    return sp.csr_matrix((np.array(vals, dtype=dtype), (rows, cols)), shape=(dim, dim))


# ---------------------------------------------------------------------------
# real-form triples
# ---------------------------------------------------------------------------

@dataclass
class _RealForm:
    N: int
    C: np.ndarray
    con: np.ndarray
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray
    b: np.ndarray

    @property
    def m(self) -> int:
        return self.b.size

    def A_of(self, X: np.ndarray) -> np.ndarray:
        return np.bincount(self.con, weights=self.val * X[self.row, self.col], minlength=self.m)

    def AT_of(self, y: np.ndarray) -> np.ndarray:
        out = sp.coo_matrix((self.val * y[self.con], (self.row, self.col)), shape=(self.N, self.N))
        return out.toarray()

    def subset(self, keep: np.ndarray) -> "_RealForm":
        remap = -np.ones(self.m, dtype=int)
        remap[keep] = np.arange(keep.size)
        mask = remap[self.con] >= 0
        return _RealForm(
            self.N, self.C, remap[self.con[mask]], self.row[mask], self.col[mask], self.val[mask], self.b[keep]
        )

    def incidence(self) -> sp.csr_matrix:
        T = self.con.size
        return sp.csr_matrix((self.val, (self.con, np.arange(T))), shape=(self.m, T))

    def schur(self, X: np.ndarray, W: np.ndarray, chunk: int = 4096) -> np.ndarray:
        """M_ij = tr(A_i X A_j W) using only the nonzero entries of the A_i."""
        S = self.incidence()
        Xg = X[np.ix_(self.col, self.row)]
        Wg = W[np.ix_(self.col, self.row)]
        T = self.con.size
        M = np.zeros((self.m, self.m))
        for start in range(0, T, chunk):
            stop = min(start + chunk, T)
            K = Xg[start:stop] * Wg[:, start:stop].T  # rows t in chunk, columns s
            KS = (S @ K.T).T  # chunk x m
            M += S[:, start:stop] @ KS
        return 0.5 * (M + M.T)


def _triples(A: Matrix):
    coo = sp.coo_matrix(A)
    return coo.row, coo.col, coo.data


def _to_real_form(p: SdpProblem) -> tuple[_RealForm, bool]:
    cplx = p.is_complex
    N = p.dimension
    cons, rows, cols, vals = [], [], [], []
    for i, (A, _) in enumerate(p.constraints):
        r, c, v = _triples(A)
        if cplx:
            re, im = np.real(v), np.imag(v)
            # emb(A)/2 = [[Re A, -Im A], [Im A, Re A]] / 2
            parts = [(r, c, re), (r + N, c + N, re), (r, c + N, -im), (r + N, c, im)]
            for pr, pc, pv in parts:
                nz = pv != 0
                rows.append(pr[nz]); cols.append(pc[nz]); vals.append(0.5 * pv[nz])
                cons.append(np.full(nz.sum(), i))
        else:
            v = np.real(v)
            nz = v != 0
            rows.append(r[nz]); cols.append(c[nz]); vals.append(v[nz])
            cons.append(np.full(nz.sum(), i))
    cat = lambda xs, dt: np.concatenate(xs).astype(dt) if xs else np.zeros(0, dt)  # noqa: E731
    if cplx:
        C = 0.5 * real_embedding(np.asarray(p.C, dtype=complex))
        size = 2 * N
    else:
        C = np.real(p.C).astype(float)
        size = N
    form = _RealForm(size, C, cat(cons, int), cat(rows, int), cat(cols, int), cat(vals, float), p.b)
    return form, cplx


def _remove_dependent(form: _RealForm, rank_tol: float = 1e-10):
    """Drop linearly dependent constraints; raise Infeasible if they are inconsistent."""
    m = form.m
    if m == 0:
        return form, np.arange(0)
    S = form.incidence()
    vec = sp.csr_matrix((form.val, (form.con, form.row * form.N + form.col)), shape=(m, form.N**2))
    G = (vec @ vec.T).toarray()
    if not np.all(np.diag(G) > 0):
        zero = np.flatnonzero(np.diag(G) <= 0)
        bad = zero[np.abs(form.b[zero]) > 1e-12]
        if bad.size:
            y = np.zeros(m)
            y[bad[0]] = np.sign(form.b[bad[0]])
            raise Infeasible(f"constraint {bad[0]} has zero matrix but nonzero right-hand side", "primal", y)
    _, R, piv = sla.qr(G, pivoting=True, mode="economic")
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > rank_tol * max(diag[0], 1e-300))) if diag.size else 0
    keep = np.sort(piv[:rank])
    drop = np.setdiff1d(np.arange(m), keep)
    if drop.size:
        Gkk = G[np.ix_(keep, keep)]
        coef = np.linalg.solve(Gkk, G[np.ix_(keep, drop)])
        mismatch = form.b[drop] - coef.T @ form.b[keep]
        scale = 1.0 + np.abs(form.b).max()
        worst = int(np.argmax(np.abs(mismatch)))
        if abs(mismatch[worst]) > 1e-9 * scale:
            y = np.zeros(m)
            y[drop[worst]] = 1.0
            y[keep] = -coef[:, worst]
            y *= np.sign(mismatch[worst])
            raise Infeasible("linearly dependent constraints are inconsistent", "primal", y)
    return form.subset(keep), keep


# ---------------------------------------------------------------------------
# interior point method
# ---------------------------------------------------------------------------

def _max_step(X: np.ndarray, dX: np.ndarray) -> float:
    """Largest alpha with X + alpha dX PSD (X positive definite)."""
    L = np.linalg.cholesky(X)
    T = sla.solve_triangular(L, dX, lower=True)
    T = sla.solve_triangular(L, T.T, lower=True)
    lam = np.linalg.eigvalsh(0.5 * (T + T.T))[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _chol_solve_psd(M: np.ndarray):
    scale = max(np.abs(np.diag(M)).max(), 1e-300)
    for reg in (0.0, 1e-14, 1e-12, 1e-10, 1e-8):
        try:
            return sla.cho_factor(M + reg * scale * np.eye(M.shape[0]), lower=True)
        except np.linalg.LinAlgError:
            continue
    return None


def _ipm(form: _RealForm, tol: float, gap_tol: float, max_iter: int):
    N, m = form.N, form.m
    C, b = form.C, form.b
    normC = np.linalg.norm(C)
    # per-constraint Frobenius norms
    normA = np.sqrt(np.bincount(form.con, weights=form.val**2, minlength=m)) if m else np.zeros(0)
    xi = max(10.0, np.sqrt(N), N * np.max((1 + np.abs(b)) / (1 + normA), initial=0.0))
    eta = max(10.0, np.sqrt(N), normC, np.max(normA, initial=0.0))
    X = xi * np.eye(N)
    Z = eta * np.eye(N)
    y = np.zeros(m)
    best = None
    stall = 0
    status = "max_iter"
    it = 0
    for it in range(1, max_iter + 1):
        Rp = b - form.A_of(X)
        Rd = C - form.AT_of(y) - Z
        pobj = float(np.vdot(C, X))
        dobj = float(b @ y)
        pinf = np.abs(Rp).max(initial=0.0)
        dinf = np.abs(Rd).max()
        gap = pobj - dobj
        score = max(pinf / tol, dinf / tol, abs(gap) / gap_tol)
        if best is None or score < best[0]:
            best = (score, X.copy(), y.copy(), Z.copy())
            stall = 0
        else:
            stall += 1
        if pinf <= tol and dinf <= tol and abs(gap) <= gap_tol and np.vdot(X, Z) <= gap_tol:
            status = "optimal"
            break
        # infeasibility heuristics
        if dobj > 1e8 * (1.0 + normC) and pinf > tol:
            yh = y / dobj
            if np.linalg.eigvalsh(form.AT_of(yh))[-1] <= 1e-6 * (1 + np.abs(yh).max()):
                raise Infeasible("primal problem is infeasible", "primal", yh)
        if -pobj > 1e8 * (1.0 + np.abs(b).max(initial=0.0)) and dinf > tol:
            Xh = X / -pobj
            if np.abs(form.A_of(Xh)).max(initial=0.0) <= 1e-6:
                raise Infeasible("dual problem is infeasible (primal unbounded)", "dual", Xh)
        if stall > 25:
            status = "stalled"
            break

        try:
            Lz = np.linalg.cholesky(Z)
        except np.linalg.LinAlgError:
            status = "numerical"
            break
        Lzi = sla.solve_triangular(Lz, np.eye(N), lower=True)
        W = Lzi.T @ Lzi
        mu = float(np.vdot(X, Z)) / N
        M = form.schur(X, W) if m else np.zeros((0, 0))
        fac = _chol_solve_psd(M) if m else None
        if m and fac is None:
            status = "numerical"
            break
        XRdW = X @ Rd @ W
        base = b + form.A_of(XRdW)
        AW = form.A_of(W)

        def direction(sigma, corr=None):
            rhs = base - sigma * mu * AW
            if corr is not None:
                rhs = rhs + form.A_of(corr)
            dy = sla.cho_solve(fac, rhs) if m else np.zeros(0)
            dZ = Rd - form.AT_of(dy)
            dX = sigma * mu * W - X - X @ dZ @ W
            if corr is not None:
                dX = dX - corr
            dX = 0.5 * (dX + dX.T)
            return dX, dy, dZ

        try:
            dXp, dyp, dZp = direction(0.0)
            ap = min(1.0, _max_step(X, dXp))
            ad = min(1.0, _max_step(Z, dZp))
            sigma = (float(np.vdot(X + ap * dXp, Z + ad * dZp)) / (N * mu)) ** 3
            sigma = min(1.0, max(sigma, 0.0))
            dX, dy, dZ = direction(sigma, dXp @ dZp @ W)
            gamma = 0.9 + 0.09 * min(ap, ad)
            ap = min(1.0, gamma * _max_step(X, dX))
            ad = min(1.0, gamma * _max_step(Z, dZ))
        except np.linalg.LinAlgError:
            status = "numerical"
            break
        X = X + ap * dX
        X = 0.5 * (X + X.T)
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = 0.5 * (Z + Z.T)
    if status != "optimal":
        _, X, y, Z = best
    return X, y, Z, it, status


def solve(
    p: SdpProblem,
    tol: float = DEFAULT_TOL,
    gap_tol: float = DEFAULT_GAP_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SdpSolution:
    """Solve ``p`` to the given residual tolerances.

    Raises NotConverged (with the best iterate attached) if the tolerances
    cannot be met, Infeasible when a certificate of infeasibility is found, and
    DimensionMismatch for inconsistent data.
    """
    if tol <= 0 or gap_tol <= 0:
        raise ValueError("tolerances must be positive")
    form, cplx = _to_real_form(p)
    reduced, keep = _remove_dependent(form)
    Xr, yk, Zr, iters, status = _ipm(reduced, tol, gap_tol, max_iter)
    y = np.zeros(form.m)
    y[keep] = yk
    if cplx:
        X = hermitian_from_embedding(Xr)
    else:
        X = 0.5 * (Xr + Xr.T)
    Z = p.C - sum((yi * (A.toarray() if sp.issparse(A) else A) for (A, _), yi in zip(p.constraints, y)),
                  np.zeros_like(p.C))
    primal = p.objective_value(X)
    dual = float(p.b @ y) + p.offset if p.constraints else p.offset
    cons_err = np.abs(p.constraint_values(X) - p.b).max(initial=0.0)
    residuals = {
        "constraint_inf_norm": float(cons_err),
        "dual_inf_norm": float(np.abs(Zr - (reduced.C - reduced.AT_of(yk))).max()),
        "min_eigenvalue": min_eig(X),
        "dual_min_eigenvalue": min_eig(Z),
        "duality_gap": float(primal - dual),
    }
    sol = SdpSolution(X, y, Z, primal, dual, residuals, iters, status)
    ok = (
        cons_err <= tol
        and residuals["dual_inf_norm"] <= tol
        and abs(primal - dual) <= gap_tol
        and residuals["min_eigenvalue"] >= -tol
    )
    if not ok:
        sol.status = status if status != "optimal" else "inaccurate"
        raise NotConverged(
            f"solver stopped ({sol.status}) after {iters} iterations: "
            f"constraint residual {cons_err:.2e}, dual residual {residuals['dual_inf_norm']:.2e}, "
            f"gap {primal - dual:.2e}",
            sol,
        )
    sol.status = "optimal"
    return sol


# ---------------------------------------------------------------------------
# text serialization
# ---------------------------------------------------------------------------

def _write_matrix(out: TextIO, M: np.ndarray) -> None:
    M = np.asarray(M)
    for row in np.real(M):
        out.write(" ".join("%.17g" % v for v in row) + "\n")
    if np.iscomplexobj(M):
        for row in np.imag(M):
            out.write(" ".join("%.17g" % v for v in row) + "\n")


def _read_matrix(lines, n: int, cplx: bool) -> np.ndarray:
    re = np.array([[float(t) for t in next(lines).split()] for _ in range(n)]).reshape(n, n)
    if not cplx:
        return re
    im = np.array([[float(t) for t in next(lines).split()] for _ in range(n)]).reshape(n, n)
    return re + 1j * im


def dump_problem(p: SdpProblem, out: Optional[TextIO] = None) -> str:
    """Write a problem as text: header lines, then row-major matrices (imaginary block after real)."""
    buf = io.StringIO()
    cplx = p.is_complex
    buf.write("sdp-problem 1\n")
    buf.write(f"dimension {p.dimension}\ncomplex {int(cplx)}\nconstraints {p.n_constraints}\n")
    buf.write("offset %.17g\nobjective\n" % p.offset)
    _write_matrix(buf, p.C.astype(complex) if cplx else np.real(p.C))
    for A, bi in p.constraints:
        dense = A.toarray() if sp.issparse(A) else A
        buf.write("constraint %.17g\n" % bi)
        _write_matrix(buf, dense.astype(complex) if cplx else np.real(dense))
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def _header(lines, key):
    parts = next(lines).split()
    if not parts or parts[0] != key:
        raise ValueError(f"expected '{key}' line, got {' '.join(parts)!r}")
    return parts[1:]


def load_problem(text: str) -> SdpProblem:
    lines = iter(text.splitlines())
    _header(lines, "sdp-problem")
    n = int(_header(lines, "dimension")[0])
    cplx = bool(int(_header(lines, "complex")[0]))
    m = int(_header(lines, "constraints")[0])
    offset = float(_header(lines, "offset")[0])
    _header(lines, "objective")
    C = _read_matrix(lines, n, cplx)
    cons = []
    for _ in range(m):
        bi = float(_header(lines, "constraint")[0])
        cons.append((_read_matrix(lines, n, cplx), bi))
    return SdpProblem(C, cons, offset)


def dump_solution(s: SdpSolution, out: Optional[TextIO] = None) -> str:
    buf = io.StringIO()
    cplx = np.iscomplexobj(s.X)
    buf.write("sdp-solution 1\n")
    buf.write(f"dimension {s.X.shape[0]}\ncomplex {int(cplx)}\nstatus {s.status}\niterations {s.iterations}\n")
    buf.write("primal_value %.17g\ndual_value %.17g\n" % (s.primal_value, s.dual_value))
    for key in sorted(s.residuals):
        buf.write("residual %s %.17g\n" % (key, s.residuals[key]))
    buf.write(f"y {s.y.size}\n")
    buf.write(" ".join("%.17g" % v for v in s.y) + "\n")
    buf.write("X\n")
    _write_matrix(buf, s.X)
    buf.write("Z\n")
    _write_matrix(buf, s.Z if cplx else np.real(s.Z))
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def load_solution(text: str) -> SdpSolution:
    lines = iter(text.splitlines())
    _header(lines, "sdp-solution")
    n = int(_header(lines, "dimension")[0])
    cplx = bool(int(_header(lines, "complex")[0]))
    status = _header(lines, "status")[0]
    iters = int(_header(lines, "iterations")[0])
    primal = float(_header(lines, "primal_value")[0])
    dual = float(_header(lines, "dual_value")[0])
    residuals = {}
    line = next(lines).split()
    while line[0] == "residual":
        residuals[line[1]] = float(line[2])
        line = next(lines).split()
    ny = int(line[1])
    y = np.array([float(t) for t in next(lines).split()]) if ny else np.zeros(0)
    _header(lines, "X")
    X = _read_matrix(lines, n, cplx)
    _header(lines, "Z")
    Z = _read_matrix(lines, n, cplx)
    return SdpSolution(X, y, Z, primal, dual, residuals, iters, status)
