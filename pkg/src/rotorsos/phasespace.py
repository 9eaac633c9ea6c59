"""Polynomial Weyl symbols on flat phase space R^{2m}.

Variables are ordered ``(x_1, ..., x_m, p_1, ..., p_m)``.  Symbols carry exact
Gaussian-rational coefficients and an exact rational ``hbar``.  The Moyal
product of two polynomials is a finite bidifferential series, evaluated here
mode by mode, and Gaussian expectations of symbols are computed with the
Isserlis (Wick) pairing recursion including a mean vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Optional, Sequence

import numpy as np

from ._exact import GaussianRational, ONE, as_gq

__all__ = [
    "PhasePoly",
    "MomentSpec",
    "star",
    "poisson_bracket",
    "angular_momentum",
    "kinetic_weyl_symbol",
    "wick_expectation",
    "PSD_TOL",
]

PSD_TOL = 1e-10

Exponent = tuple[int, ...]


def _falling(n: int, r: int) -> int:
    out = 1
    for t in range(r):
        out *= n - t
    return out


class PhasePoly:
    """Polynomial symbol in ``m`` position/momentum pairs."""

    __slots__ = ("n_modes", "hbar", "_terms")

    def __init__(self, n_modes: int, terms: Optional[Mapping[Exponent, object]] = None, hbar=1):
        if n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        self.n_modes = n_modes
        self.hbar = Fraction(hbar)
        clean: dict[Exponent, GaussianRational] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != 2 * n_modes or any(a < 0 for a in e):
                raise ValueError(f"bad exponent vector {e} for {n_modes} modes")
            c = as_gq(c)
            if c:
                clean[e] = clean[e] + c if e in clean else c
                if not clean[e]:
                    del clean[e]
        self._terms = clean

    @classmethod
    def _raw(cls, n_modes, terms, hbar) -> "PhasePoly":
        obj = cls.__new__(cls)
        obj.n_modes = n_modes
        obj.hbar = hbar
        obj._terms = terms
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, n_modes: int, value=1, hbar=1) -> "PhasePoly":
        return cls(n_modes, {(0,) * (2 * n_modes): value}, hbar)

    @classmethod
    def x(cls, n_modes: int, i: int, hbar=1) -> "PhasePoly":
        """Position coordinate x_i (1-based)."""
        return cls._unit(n_modes, i - 1, hbar)

    @classmethod
    def p(cls, n_modes: int, i: int, hbar=1) -> "PhasePoly":
        """Momentum coordinate p_i (1-based)."""
        return cls._unit(n_modes, n_modes + i - 1, hbar)

    @classmethod
    def _unit(cls, n_modes, slot, hbar):
        if not 0 <= slot < 2 * n_modes:
            raise ValueError("variable index out of range")
        e = [0] * (2 * n_modes)
        e[slot] = 1
        return cls(n_modes, {tuple(e): 1}, hbar)

    # -- accessors --------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, GaussianRational]:
        return dict(self._terms)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def constant_term(self) -> GaussianRational:
        return self._terms.get((0,) * (2 * self.n_modes), GaussianRational(0))

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def evaluate(self, point: Sequence[float]) -> complex:
        z = np.asarray(point, dtype=float)
        total = 0j
        for e, c in self._terms.items():
            total += complex(c) * float(np.prod(z ** np.asarray(e)))
        return total

    def derivative(self, slot: int) -> "PhasePoly":
        """Partial derivative in variable ``slot`` (0-based in x..., p... order)."""
        out: dict[Exponent, GaussianRational] = {}
        for e, c in self._terms.items():
            if e[slot]:
                lst = list(e)
                lst[slot] -= 1
                out[tuple(lst)] = c * e[slot]
        return PhasePoly._raw(self.n_modes, out, self.hbar)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "PhasePoly") -> None:
        if other.n_modes != self.n_modes:
            raise ValueError(f"mode-count mismatch: {self.n_modes} vs {other.n_modes}")
        if other.hbar != self.hbar:
            raise ValueError(f"hbar mismatch: {self.hbar} vs {other.hbar}")

    def _lift(self, other):
        if isinstance(other, PhasePoly):
            self._check(other)
            return other
        try:
            return PhasePoly.constant(self.n_modes, as_gq(other), self.hbar)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return PhasePoly(self.n_modes, _merge(self._terms, o._terms, ONE), self.hbar)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return PhasePoly(self.n_modes, _merge(self._terms, o._terms, -ONE), self.hbar)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return PhasePoly._raw(self.n_modes, {e: -c for e, c in self._terms.items()}, self.hbar)

    def __mul__(self, other):
        """Pointwise (commutative) product of symbols."""
        if isinstance(other, PhasePoly):
            self._check(other)
            out: dict[Exponent, GaussianRational] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out[e] + c1 * c2 if e in out else c1 * c2
            return PhasePoly(self.n_modes, out, self.hbar)
        try:
            s = as_gq(other)
        except TypeError:
            return NotImplemented
        return PhasePoly(self.n_modes, {e: c * s for e, c in self._terms.items()}, self.hbar)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = PhasePoly.constant(self.n_modes, 1, self.hbar)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = other if isinstance(other, PhasePoly) else self._lift(other)
        if o is None:
            return NotImplemented
        return self.n_modes == o.n_modes and self.hbar == o.hbar and self._terms == o._terms

    def __hash__(self):
        return hash((self.n_modes, self.hbar, frozenset(self._terms.items())))

    def __repr__(self):
        return f"PhasePoly(n_modes={self.n_modes}, hbar={self.hbar}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        m = self.n_modes
        names = [f"x{i}" for i in range(1, m + 1)] + [f"p{i}" for i in range(1, m + 1)]
        parts = []
        for e in sorted(self._terms, key=lambda e: (sum(e), e)):
            factors = [n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a]
            mono = "*".join(factors)
            c = self._terms[e]
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def _merge(a, b, scale):
    out = dict(a)
    for e, c in b.items():
        out[e] = out[e] + c * scale if e in out else c * scale
    return out


# ---------------------------------------------------------------------------
# Moyal product
# ---------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def _single_mode_star(a: int, b: int, c: int, d: int, hbar: Fraction) -> tuple:
    """x^a p^b (star) x^c p^d for one mode, as ((x_exp, p_exp), coeff) pairs.

    The Moyal bidifferential operator for one mode splits into two commuting
    pieces, d_x (x) d_p and -d_p (x) d_x, so its exponential is a double sum.
    """
    half = GaussianRational(0, hbar / 2)  # i hbar / 2
    out: dict[tuple[int, int], GaussianRational] = {}
    for r in range(min(a, d) + 1):
        for s in range(min(b, c) + 1):
            num = _falling(a, r) * _falling(d, r) * _falling(b, s) * _falling(c, s)
            coeff = half ** (r + s) * Fraction((-1) ** s * num, factorial(r) * factorial(s))
            key = (a - r + c - s, b - s + d - r)
            out[key] = out[key] + coeff if key in out else coeff
    return tuple((k, v) for k, v in out.items() if v)


def star(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    """Moyal product f (star) g, exact for polynomial symbols."""
    f._check(g)
    m = f.n_modes
    out: dict[Exponent, GaussianRational] = {}
    for ef, cf in f._terms.items():
        for eg, cg in g._terms.items():
            partial: list[tuple[list[int], GaussianRational]] = [([0] * (2 * m), cf * cg)]
            for i in range(m):
                if not (ef[i] or ef[m + i] or eg[i] or eg[m + i]):
                    continue
                pieces = _single_mode_star(ef[i], ef[m + i], eg[i], eg[m + i], f.hbar)
                nxt = []
                for exps, coeff in partial:
                    for (xe, pe), c in pieces:
                        e = list(exps)
                        e[i] = xe
                        e[m + i] = pe
                        nxt.append((e, coeff * c))
                partial = nxt
            for e, c in partial:
                key = tuple(e)
                out[key] = out[key] + c if key in out else c
    return PhasePoly(m, out, f.hbar)


def poisson_bracket(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    """{f, g} = sum_i (d_{x_i} f d_{p_i} g - d_{p_i} f d_{x_i} g)."""
    f._check(g)
    m = f.n_modes
    out = PhasePoly(m, hbar=f.hbar)
    for i in range(m):
        out = out + f.derivative(i) * g.derivative(m + i) - f.derivative(m + i) * g.derivative(i)
    return out


def angular_momentum(k: int, i: int, j: int, hbar=1) -> PhasePoly:
    """Classical generator x_i p_j - x_j p_i over k modes."""
    X = lambda a: PhasePoly.x(k, a, hbar)  # noqa: E731
    Pm = lambda a: PhasePoly.p(k, a, hbar)  # noqa: E731
    return X(i) * Pm(j) - X(j) * Pm(i)


@lru_cache(maxsize=64)
def kinetic_weyl_symbol(k: int, hbar=1) -> PhasePoly:
    """Weyl symbol of sum_{i<j} L_ij^2, computed with the Moyal product."""
    if k < 2:
        raise ValueError("k must be >= 2")
    acc: dict[Exponent, GaussianRational] = {}
    for i, j in itertools.combinations(range(1, k + 1), 2):
        L = angular_momentum(k, i, j, hbar)
        for e, c in star(L, L)._terms.items():
            acc[e] = acc[e] + c if e in acc else c
    return PhasePoly(k, acc, hbar)


# ---------------------------------------------------------------------------
# Gaussian moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentSpec:
    """Mean and covariance of a Gaussian on R^{2m}, variables ordered like PhasePoly."""

    mean: np.ndarray
    covariance: np.ndarray
    psd_tol: float = field(default=PSD_TOL)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.covariance, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] != mean.size:
            raise ValueError(f"mean of length {mean.size} does not match covariance {cov.shape}")
        if not np.allclose(cov, cov.T, atol=1e-12, rtol=0):
            raise ValueError("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if cov.size and np.linalg.eigvalsh(cov)[0] < -self.psd_tol:
            raise ValueError("covariance is not positive semidefinite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def centered(cls, covariance) -> "MomentSpec":
        cov = np.asarray(covariance, dtype=float)
        return cls(np.zeros(cov.shape[0]), cov)

    @property
    def dim(self) -> int:
        return self.mean.size


def _isserlis(mean: np.ndarray, cov: np.ndarray):
    @lru_cache(maxsize=None)
    def moment(idx: tuple[int, ...]) -> float:
        if not idx:
            return 1.0
        first, rest = idx[0], idx[1:]
        total = mean[first] * moment(rest) if mean[first] else 0.0
        seen = set()
        for pos, other in enumerate(rest):
            if other in seen:
                # identical variables give identical reduced tuples; count them
                continue
            seen.add(other)
            mult = rest.count(other)
            c = cov[first, other]
            if c:
                reduced = rest[:pos] + rest[pos + 1:]
                total += mult * c * moment(reduced)
        return total

    return moment


def wick_expectation(f: PhasePoly, m: MomentSpec):
    """Expectation of symbol ``f`` under the Gaussian described by ``m``.

    Returns a float when every coefficient of ``f`` is real, otherwise a complex.
    """
    if m.dim != 2 * f.n_modes:
        raise ValueError(f"moment spec has dimension {m.dim}, symbol needs {2 * f.n_modes}")
    moment = _isserlis(m.mean, m.covariance)
    total = 0j
    for e, c in f._terms.items():
        idx = tuple(sorted(itertools.chain.from_iterable([v] * a for v, a in enumerate(e) if a)))
        total += complex(c) * moment(idx)
    return total.real if f.is_real() else total
