"""Exact polynomial functions and first-order operators on the sphere S^{k-1}.

Functions on the sphere are represented by polynomials in x_1, ..., x_k modulo
the ideal generated by ``x_1^2 + ... + x_k^2 - 1``.  The canonical
representative never contains ``x_k`` to a power above one; the rewrite
``x_k^2 -> 1 - sum_{i<k} x_i^2`` is applied until it no longer fires.  All
coefficients are exact Gaussian rationals, so every operator identity checked
here is checked with zero tolerance.

Indices in the public API are 1-based (``x_1 .. x_k``).  The Laplacian is the
positive-semidefinite one, ``Delta = -div grad``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from ._exact import GaussianRational, I, ONE, ZERO, as_gq

__all__ = [
    "SpherePoly",
    "OperatorLabel",
    "X",
    "P",
    "Q",
    "V",
    "LAPLACIAN",
    "reduce",
    "apply",
    "RelationReport",
    "RELATIONS",
    "UNCORRECTED_RELATIONS",
    "check_relation",
    "check_identity",
    "check_all",
    "divergence_of_ptilde",
    "divergence_closed_form",
    "monomials_up_to",
]

Exponent = tuple[int, ...]
RawPoly = dict[Exponent, GaussianRational]


# ---------------------------------------------------------------------------
# raw (unreduced) polynomial helpers
# ---------------------------------------------------------------------------

def _add_term(dst: RawPoly, exp: Exponent, coeff: GaussianRational) -> None:
    if not coeff:
        return
    cur = dst.get(exp)
    new = coeff if cur is None else cur + coeff
    if new:
        dst[exp] = new
    else:
        dst.pop(exp, None)


def _raw_add(p: RawPoly, q: RawPoly, scale=ONE) -> RawPoly:
    out = dict(p)
    for e, c in q.items():
        _add_term(out, e, c * scale)
    return out


def _raw_scale(p: RawPoly, scale) -> RawPoly:
    s = as_gq(scale)
    if not s:
        return {}
    return {e: c * s for e, c in p.items()}


def _raw_mul(p: RawPoly, q: RawPoly) -> RawPoly:
    out: RawPoly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            _add_term(out, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
    return out


def _raw_mul_var(p: RawPoly, j: int) -> RawPoly:
    """Multiply by x_j (0-based index)."""
    out: RawPoly = {}
    for e, c in p.items():
        lst = list(e)
        lst[j] += 1
        out[tuple(lst)] = c
    return out


def _raw_deriv(p: RawPoly, j: int) -> RawPoly:
    """Partial derivative with respect to x_j (0-based index)."""
    out: RawPoly = {}
    for e, c in p.items():
        if e[j] == 0:
            continue
        lst = list(e)
        lst[j] -= 1
        _add_term(out, tuple(lst), c * e[j])
    return out


def _raw_euler(p: RawPoly) -> RawPoly:
    """The Euler operator sum_j x_j d_j, i.e. multiplication by total degree."""
    out: RawPoly = {}
    for e, c in p.items():
        d = sum(e)
        if d:
            out[e] = c * d
    return out


@lru_cache(maxsize=None)
def _one_minus_s_power(k: int, q: int) -> tuple[tuple[Exponent, GaussianRational], ...]:
    """Expansion of (1 - sum_{i<k} x_i^2)^q as a tuple of (exponent, coeff)."""
    out: RawPoly = {}
    m = k - 1
    for js in _compositions_upto(m, q):
        total = sum(js)
        # multinomial: q! / ((q - total)! prod j_i!)
        coeff = comb(q, total)
        rest = total
        for j in js:
            coeff *= comb(rest, j)
            rest -= j
        sign = -1 if total % 2 else 1
        exp = tuple(2 * j for j in js) + (0,)
        _add_term(out, exp, GaussianRational(sign * coeff))
    return tuple(out.items())


def _compositions_upto(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative ints with sum <= total."""
    if parts == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions_upto(parts - 1, total - first):
            yield (first,) + rest


def _reduce_raw(k: int, p: Mapping[Exponent, GaussianRational]) -> RawPoly:
    out: RawPoly = {}
    for e, c in p.items():
        if len(e) != k:
            raise ValueError(f"exponent {e} does not have length k={k}")
        last = e[-1]
        if last < 2:
            _add_term(out, tuple(e), c)
            continue
        q, r = divmod(last, 2)
        base = e[:-1] + (r,)
        for se, sc in _one_minus_s_power(k, q):
            _add_term(out, tuple(a + b for a, b in zip(base, se)), c * sc)
    return out


# ---------------------------------------------------------------------------
# SpherePoly
# ---------------------------------------------------------------------------

class SpherePoly:
    """Canonical polynomial function on S^{k-1} with Gaussian-rational coefficients.

    Instances are immutable values; arithmetic returns new canonical objects.
    """

    __slots__ = ("k", "_terms")

    def __init__(self, k: int, terms: Optional[Mapping[Exponent, object]] = None):
        if k < 2:
            raise ValueError("the sphere S^{k-1} needs k >= 2")
        self.k = k
        raw = {tuple(e): as_gq(c) for e, c in (terms or {}).items()}
        self._terms = _reduce_raw(k, {e: c for e, c in raw.items() if c})

    @classmethod
    def _from_canonical(cls, k: int, terms: RawPoly) -> "SpherePoly":
        obj = cls.__new__(cls)
        obj.k = k
        obj._terms = terms
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, k: int, value=1) -> "SpherePoly":
        return cls(k, {(0,) * k: value})

    @classmethod
    def variable(cls, k: int, i: int) -> "SpherePoly":
        """The coordinate function x_i (1-based)."""
        _check_index(i, k)
        e = [0] * k
        e[i - 1] = 1
        return cls(k, {tuple(e): 1})

    @classmethod
    def monomial(cls, k: int, exponents: Sequence[int], coeff=1) -> "SpherePoly":
        return cls(k, {tuple(exponents): coeff})

    # -- accessors --------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, GaussianRational]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def coefficient(self, exponents: Sequence[int]) -> GaussianRational:
        return self._terms.get(tuple(exponents), ZERO)

    def evaluate(self, point: Sequence[float]) -> complex:
        """Numerical value at a point (meaningful on the unit sphere)."""
        total = 0j
        for e, c in self._terms.items():
            term = complex(c)
            for xi, ei in zip(point, e):
                term *= xi**ei
            total += term
        return total

    # -- arithmetic -------------------------------------------------------
    def _same(self, other: "SpherePoly") -> None:
        if other.k != self.k:
            raise ValueError(f"dimension mismatch: k={self.k} vs k={other.k}")

    def _lift(self, other) -> Optional["SpherePoly"]:
        if isinstance(other, SpherePoly):
            self._same(other)
            return other
        try:
            return SpherePoly.constant(self.k, as_gq(other))
        except TypeError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return SpherePoly._from_canonical(self.k, _raw_add(self._terms, o._terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return SpherePoly._from_canonical(
            self.k, _raw_add(self._terms, o._terms, GaussianRational(-1))
        )

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return SpherePoly._from_canonical(self.k, _raw_scale(self._terms, -1))

    def __mul__(self, other):
        if isinstance(other, SpherePoly):
            self._same(other)
            prod = _raw_mul(self._terms, other._terms)
            return SpherePoly._from_canonical(self.k, _reduce_raw(self.k, prod))
        try:
            s = as_gq(other)
        except TypeError:
            return NotImplemented
        return SpherePoly._from_canonical(self.k, _raw_scale(self._terms, s))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = SpherePoly.constant(self.k, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, SpherePoly) else other
        if o is None:
            return NotImplemented
        return self.k == o.k and self._terms == o._terms

    def __hash__(self):
        return hash((self.k, frozenset(self._terms.items())))

    def __repr__(self):
        return f"SpherePoly(k={self.k}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=lambda e: (sum(e), e)):
            parts.append(f"{self._terms[e]}*{format_monomial(e)}" if any(e) else str(self._terms[e]))
        return " + ".join(parts)


def format_monomial(e: Exponent) -> str:
    factors = []
    for i, a in enumerate(e, start=1):
        if a == 1:
            factors.append(f"x{i}")
        elif a > 1:
            factors.append(f"x{i}^{a}")
    return "*".join(factors) if factors else "1"


def reduce(k: int, raw: Mapping[Exponent, object]) -> SpherePoly:
    """Canonical form of a raw polynomial modulo ``|x|^2 - 1``."""
    return SpherePoly(k, raw)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorLabel:
    """Name of a first-order operator on L^2(S^{k-1}) (or the Laplacian).

    ``kind`` is one of ``"X"``, ``"P"``, ``"Q"``, ``"V"``, ``"LAPLACIAN"``; indices
    are 1-based and ``V(i, j)`` requires ``i < j``.
    """

    kind: str
    i: Optional[int] = None
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind not in {"X", "P", "Q", "V", "LAPLACIAN"}:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind == "LAPLACIAN":
            if self.i is not None or self.j is not None:
                raise ValueError("LAPLACIAN takes no indices")
        elif self.kind == "V":
            if self.i is None or self.j is None or not self.i < self.j:
                raise ValueError("V(i, j) needs indices i < j")
        elif self.i is None or self.j is not None:
            raise ValueError(f"{self.kind} takes exactly one index")

    def validate(self, k: int) -> None:
        for idx in (self.i, self.j):
            if idx is not None:
                _check_index(idx, k)

    def __str__(self):
        if self.kind == "LAPLACIAN":
            return "Delta"
        if self.kind == "V":
            return f"v{self.i}{self.j}"
        return f"{self.kind.lower()}{self.i}"


def X(i: int) -> OperatorLabel:
    return OperatorLabel("X", i)


def P(i: int) -> OperatorLabel:
    return OperatorLabel("P", i)


def Q(i: int) -> OperatorLabel:
    return OperatorLabel("Q", i)


def V(i: int, j: int) -> OperatorLabel:
    return OperatorLabel("V", i, j)


LAPLACIAN = OperatorLabel("LAPLACIAN")


def _check_index(i: int, k: int) -> None:
    if not 1 <= i <= k:
        raise ValueError(f"index {i} out of range 1..{k}")


def _tangential(terms: RawPoly, i0: int) -> RawPoly:
    # d_i f - x_i (x . grad f)
    return _raw_add(_raw_deriv(terms, i0), _raw_mul_var(_raw_euler(terms), i0), GaussianRational(-1))


def _ambient_laplacian_positive(k: int, terms: RawPoly) -> RawPoly:
    # Delta_S f = E(E + k - 2) f - Delta_{R^k} f on |x| = 1, for any extension f
    euler = _raw_euler(terms)
    radial = _raw_add(_raw_euler(euler), euler, GaussianRational(k - 2))
    flat: RawPoly = {}
    for j in range(k):
        flat = _raw_add(flat, _raw_deriv(_raw_deriv(terms, j), j))
    return _raw_add(radial, flat, GaussianRational(-1))


def apply(op: OperatorLabel, f: SpherePoly) -> SpherePoly:
    """Apply an operator to a canonical sphere polynomial; the result is canonical.

    * ``X(i)``: multiplication by x_i.
    * ``P(i)``: tangential derivative ``d_i - x_i (x . grad)``.
    * ``Q(i)``: symmetrised momentum ``i P(i) - i (k-1)/2 X(i)``.
    * ``V(i, j)``: rotation field ``x_i d_j - x_j d_i``.
    * ``LAPLACIAN``: ``E(E + k - 2) - Delta_flat`` with E the Euler operator.
      This route is independent of the P/Q/V expressions it is checked against.
    """
    k = f.k
    op.validate(k)
    t = f._terms
    if op.kind == "X":
        out = _raw_mul_var(t, op.i - 1)
    elif op.kind == "P":
        out = _tangential(t, op.i - 1)
    elif op.kind == "Q":
        i0 = op.i - 1
        out = _raw_add(
            _raw_scale(_tangential(t, i0), I),
            _raw_mul_var(t, i0),
            GaussianRational(0, Fraction(-(k - 1), 2)),
        )
    elif op.kind == "V":
        i0, j0 = op.i - 1, op.j - 1
        out = _raw_add(
            _raw_mul_var(_raw_deriv(t, j0), i0),
            _raw_mul_var(_raw_deriv(t, i0), j0),
            GaussianRational(-1),
        )
    else:
        out = _ambient_laplacian_positive(k, t)
    return SpherePoly._from_canonical(k, _reduce_raw(k, out))


def apply_word(ops: Iterable[OperatorLabel], f: SpherePoly) -> SpherePoly:
    """Apply a product of operators; the rightmost acts first."""
    for op in reversed(list(ops)):
        f = apply(op, f)
    return f


# ---------------------------------------------------------------------------
# relation catalogue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationReport:
    relation_id: str
    k: int
    degree_bound: int
    holds: bool
    witness: Optional[str] = None
    checked: int = 0

    def to_line(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        line = f"{self.relation_id} {self.k} {self.degree_bound} {status}"
        return f"{line} {self.witness}" if self.witness else line


Side = Callable[[int, tuple[int, ...], SpherePoly], SpherePoly]


@dataclass(frozen=True)
class _Relation:
    description: str
    indices: Callable[[int], Iterable[tuple[int, ...]]]
    lhs: Side
    rhs: Side


def _pairs(k):
    return itertools.product(range(1, k + 1), repeat=2)


def _none(k):
    return [()]


def _v_and_l(k):
    for i, j in itertools.combinations(range(1, k + 1), 2):
        for l in range(1, k + 1):
            yield (i, j, l)


def _delta(i, j):
    return 1 if i == j else 0


def _comm(a: OperatorLabel, b: OperatorLabel, f: SpherePoly) -> SpherePoly:
    return apply(a, apply(b, f)) - apply(b, apply(a, f))


def _x(i):
    return X(i)


def _r7_rhs(k, idx, f):
    return f * GaussianRational(0, Fraction(-(k - 1), 2))


def _sum(k, fn) -> SpherePoly:
    out = SpherePoly(k)
    for i in range(1, k + 1):
        out = out + fn(i)
    return out


RELATIONS: dict[str, _Relation] = {
    "R1": _Relation(
        "[x_i, x_j] = 0",
        _pairs,
        lambda k, ij, f: _comm(X(ij[0]), X(ij[1]), f),
        lambda k, ij, f: SpherePoly(k),
    ),
    "R2": _Relation(
        "[p_j, x_i] = delta_ij - x_i x_j",
        _pairs,
        lambda k, ij, f: _comm(P(ij[1]), X(ij[0]), f),
        lambda k, ij, f: f * _delta(*ij) - apply(X(ij[0]), apply(X(ij[1]), f)),
    ),
    "R3": _Relation(
        "[p_i, p_j] = x_i p_j - x_j p_i",
        _pairs,
        lambda k, ij, f: _comm(P(ij[0]), P(ij[1]), f),
        lambda k, ij, f: apply(X(ij[0]), apply(P(ij[1]), f)) - apply(X(ij[1]), apply(P(ij[0]), f)),
    ),
    "R4": _Relation(
        "sum_i x_i p_i = 0",
        _none,
        lambda k, _, f: _sum(k, lambda i: apply(X(i), apply(P(i), f))),
        lambda k, _, f: SpherePoly(k),
    ),
    "R5": _Relation(
        "[q_j, x_i] = i (delta_ij - x_i x_j)",
        _pairs,
        lambda k, ij, f: _comm(Q(ij[1]), X(ij[0]), f),
        lambda k, ij, f: (f * _delta(*ij) - apply(X(ij[0]), apply(X(ij[1]), f))) * I,
    ),
    "R6": _Relation(
        "[q_i, q_j] = i (x_i q_j - x_j q_i)",
        _pairs,
        lambda k, ij, f: _comm(Q(ij[0]), Q(ij[1]), f),
        lambda k, ij, f: (apply(X(ij[0]), apply(Q(ij[1]), f)) - apply(X(ij[1]), apply(Q(ij[0]), f))) * I,
    ),
    "R7": _Relation(
        "sum_i x_i q_i = -i (k-1)/2",
        _none,
        lambda k, _, f: _sum(k, lambda i: apply(X(i), apply(Q(i), f))),
        _r7_rhs,
    ),
    "R8": _Relation(
        "Delta = -sum_i p_i^2",
        _none,
        lambda k, _, f: apply(LAPLACIAN, f),
        lambda k, _, f: -_sum(k, lambda i: apply(P(i), apply(P(i), f))),
    ),
    "R9": _Relation(
        "Delta = sum_i q_i^2 - (k-1)^2/4",
        _none,
        lambda k, _, f: apply(LAPLACIAN, f),
        lambda k, _, f: _sum(k, lambda i: apply(Q(i), apply(Q(i), f))) - f * Fraction((k - 1) ** 2, 4),
    ),
    "R10": _Relation(
        "Delta = -sum_{i<j} v_ij^2",
        _none,
        lambda k, _, f: apply(LAPLACIAN, f),
        lambda k, _, f: -sum(
            (apply(V(i, j), apply(V(i, j), f)) for i, j in itertools.combinations(range(1, k + 1), 2)),
            SpherePoly(k),
        ),
    ),
    "R11": _Relation(
        "[v_ij, x_l] = delta_jl x_i - delta_il x_j",
        _v_and_l,
        lambda k, ijl, f: _comm(V(ijl[0], ijl[1]), X(ijl[2]), f),
        lambda k, ijl, f: apply(X(ijl[0]), f) * _delta(ijl[1], ijl[2])
        - apply(X(ijl[1]), f) * _delta(ijl[0], ijl[2]),
    ),
}


# Sign variants of R3 and R6 with the orientation of the right-hand side
# flipped (and, for R6, without the factor i).  They are false for the
# operators defined above and are kept so the checker can demonstrate that.
UNCORRECTED_RELATIONS: dict[str, _Relation] = {
    "R3'": _Relation(
        "[p_i, p_j] = x_j p_i - x_i p_j",
        _pairs,
        RELATIONS["R3"].lhs,
        lambda k, ij, f: apply(X(ij[1]), apply(P(ij[0]), f)) - apply(X(ij[0]), apply(P(ij[1]), f)),
    ),
    "R6'": _Relation(
        "[q_i, q_j] = x_i q_j - x_j q_i",
        _pairs,
        RELATIONS["R6"].lhs,
        lambda k, ij, f: apply(X(ij[0]), apply(Q(ij[1]), f)) - apply(X(ij[1]), apply(Q(ij[0]), f)),
    ),
}


def monomials_up_to(k: int, degree_bound: int) -> Iterator[Exponent]:
    """Every exponent vector of length k with total degree <= degree_bound."""
    for d in range(degree_bound + 1):
        for combo in itertools.combinations_with_replacement(range(k), d):
            e = [0] * k
            for c in combo:
                e[c] += 1
            yield tuple(e)


def check_identity(
    lhs: Side,
    rhs: Side,
    k: int,
    degree_bound: int,
    index_tuples: Iterable[tuple[int, ...]] = ((),),
    relation_id: str = "custom",
) -> RelationReport:
    """Compare two operator expressions on every monomial of degree <= degree_bound."""
    if degree_bound < 1:
        raise ValueError("degree_bound must be >= 1")
    checked = 0
    index_tuples = list(index_tuples)
    for e in monomials_up_to(k, degree_bound):
        f = SpherePoly.monomial(k, e)
        for idx in index_tuples:
            checked += 1
            if lhs(k, idx, f) != rhs(k, idx, f):
                where = format_monomial(e)
                if idx:
                    where += "@" + ",".join(str(i) for i in idx)
                return RelationReport(relation_id, k, degree_bound, False, where, checked)
    return RelationReport(relation_id, k, degree_bound, True, None, checked)


def check_relation(relation_id: str, k: int, degree_bound: int) -> RelationReport:
    """Verify one catalogue relation exactly on all monomials up to ``degree_bound``."""
    rel = RELATIONS.get(relation_id) or UNCORRECTED_RELATIONS.get(relation_id)
    if rel is None:
        raise KeyError(f"unknown relation {relation_id!r}; known: {sorted(RELATIONS)}")
    if k < 2:
        raise ValueError("k must be >= 2")
    return check_identity(rel.lhs, rel.rhs, k, degree_bound, rel.indices(k), relation_id)


def check_all(k: int, degree_bound: int) -> list[RelationReport]:
    return [check_relation(rid, k, degree_bound) for rid in RELATIONS]


# ---------------------------------------------------------------------------
# divergence of the projected coordinate fields
# ---------------------------------------------------------------------------

def divergence_of_ptilde(i: int, k: int) -> SpherePoly:
    """Divergence of the projected field ``grad x_i`` on S^{k-1}.

    The field is extended 0-homogeneously to R^k \\ {0}, where its j-th
    component is ``delta_ij - x_i x_j / |x|^2``, and its flat divergence is
    evaluated on the unit sphere.  Terms are tracked as ``poly * |x|^(-2m)``.
    """
    _check_index(i, k)
    i0 = i - 1
    zero = (0,) * k
    total: dict[int, RawPoly] = {}

    def add(m: int, poly: RawPoly) -> None:
        total[m] = _raw_add(total.get(m, {}), poly)

    for j0 in range(k):
        component: dict[int, RawPoly] = {}
        if j0 == i0:
            component[0] = {zero: ONE}
        xixj = _raw_mul_var(_raw_mul_var({zero: GaussianRational(-1)}, i0), j0)
        component[1] = xixj
        for m, poly in component.items():
            # d_j (poly r^{-2m}) = (d_j poly) r^{-2m} - 2m x_j poly r^{-2m-2}
            add(m, _raw_deriv(poly, j0))
            if m:
                add(m + 1, _raw_scale(_raw_mul_var(poly, j0), -2 * m))
    on_sphere: RawPoly = {}
    for poly in total.values():
        on_sphere = _raw_add(on_sphere, poly)
    return SpherePoly._from_canonical(k, _reduce_raw(k, on_sphere))


def divergence_closed_form(i: int, k: int) -> SpherePoly:
    return SpherePoly.variable(k, i) * -(k - 1)
