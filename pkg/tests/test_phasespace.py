from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorsos._exact import GaussianRational
from rotorsos.montecarlo import RunningStats, substream
from rotorsos.phasespace import (
    MomentSpec,
    PhasePoly,
    angular_momentum,
    kinetic_weyl_symbol,
    poisson_bracket,
    star,
    wick_expectation,
)

x = PhasePoly.x
p = PhasePoly.p


def half_i(hbar=1):
    return GaussianRational(0, Fraction(hbar) / 2)


def test_star_x_p():
    assert star(x(1, 1), p(1, 1)) == x(1, 1) * p(1, 1) + PhasePoly.constant(1, half_i())


def test_star_with_hbar():
    h = Fraction(1, 3)
    got = star(x(1, 1, h), p(1, 1, h))
    assert got == x(1, 1, h) * p(1, 1, h) + PhasePoly.constant(1, half_i(h), h)


def test_star_of_positions_commutes():
    assert star(x(2, 1), x(2, 2)) == x(2, 1) * x(2, 2)


@pytest.mark.parametrize("k,i,j", [(2, 1, 2), (3, 1, 3), (4, 2, 4)])
def test_moyal_angular_momentum_square(k, i, j):
    L = angular_momentum(k, i, j)
    assert star(L, L) == L * L - PhasePoly.constant(k, Fraction(1, 2))


def test_moyal_square_scales_with_hbar():
    h = Fraction(2)
    L = angular_momentum(2, 1, 2, h)
    assert star(L, L) == L * L - PhasePoly.constant(2, h * h / 2, h)


def test_mode_mismatch_raises():
    with pytest.raises(ValueError):
        star(x(1, 1), x(2, 1))


def test_kinetic_symbol_structure():
    for k in (2, 3, 5):
        sym = kinetic_weyl_symbol(k)
        assert sym.constant_term() == GaussianRational(Fraction(-comb(k, 2), 2), 0)
        assert sym.constant_term() == GaussianRational(Fraction(-k * (k - 1), 4), 0)
        classical = sum((angular_momentum(k, i, j) ** 2 for i in range(1, k) for j in range(i + 1, k + 1)),
                        PhasePoly.constant(k, 0))
        assert sym == classical - PhasePoly.constant(k, Fraction(comb(k, 2), 2))


def test_kinetic_symbol_k2():
    L = angular_momentum(2, 1, 2)
    assert kinetic_weyl_symbol(2) == L * L - PhasePoly.constant(2, Fraction(1, 2))


def _random_poly(draw_terms, modes):
    terms = {}
    for e, c in draw_terms:
        terms[tuple(e[: 2 * modes])] = c
    return PhasePoly(modes, terms)


exps = st.tuples(*[st.integers(0, 2)] * 4)
coef = st.integers(-3, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(exps, coef), max_size=3), st.lists(st.tuples(exps, coef), max_size=3))
def test_commutator_is_poisson_bracket_at_degree_two(a, b):
    f = _random_poly([(e, c) for e, c in a if sum(e) <= 2], 2)
    g = _random_poly([(e, c) for e, c in b if sum(e) <= 2], 2)
    lhs = star(f, g) - star(g, f)
    assert lhs == poisson_bracket(f, g) * GaussianRational(0, 1)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.tuples(exps, coef), max_size=3),
    st.lists(st.tuples(exps, coef), max_size=3),
    st.lists(st.tuples(exps, coef), max_size=3),
)
def test_star_is_associative(a, b, c):
    f, g, h = (_random_poly([(e, v) for e, v in t if sum(e) <= 3], 2) for t in (a, b, c))
    assert star(star(f, g), h) == star(f, star(g, h))


def test_wick_examples():
    s2 = 0.7
    m = MomentSpec.centered([[s2, 0.0], [0.0, 1.0]])
    assert wick_expectation(x(1, 1) ** 2, m) == pytest.approx(s2)
    assert wick_expectation(x(1, 1) ** 4, m) == pytest.approx(3 * s2**2)


def test_wick_degree_four_pairings():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((4, 4))
    cov = A @ A.T
    m = MomentSpec.centered(cov)
    # variables (x1, x2, p1, p2) at slots 0..3
    f = x(2, 1) * p(2, 2) * x(2, 2) * p(2, 1)
    c = cov
    expected = c[0, 3] * c[1, 2] + c[0, 1] * c[3, 2] + c[0, 2] * c[1, 3]
    assert wick_expectation(f, m) == pytest.approx(expected, rel=1e-12)


def test_wick_with_mean():
    m = MomentSpec(np.array([0.5, -1.0]), np.array([[2.0, 0.3], [0.3, 1.0]]))
    # E[x^2 p] = mu_x^2 mu_p + var_x mu_p + 2 cov mu_x
    expected = 0.25 * -1.0 + 2.0 * -1.0 + 2 * 0.3 * 0.5
    assert wick_expectation(x(1, 1) ** 2 * p(1, 1), m) == pytest.approx(expected)


def test_wick_returns_complex_for_complex_symbols():
    m = MomentSpec.centered(np.eye(2))
    val = wick_expectation(star(x(1, 1), p(1, 1)), m)
    assert isinstance(val, complex)
    assert val == pytest.approx(0.5j)


def test_moment_spec_validation():
    with pytest.raises(ValueError):
        MomentSpec.centered([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(ValueError):
        MomentSpec.centered([[1.0, 0.1], [0.0, 1.0]])
    with pytest.raises(ValueError):
        wick_expectation(x(2, 1), MomentSpec.centered(np.eye(2)))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000), st.lists(st.tuples(exps, coef), min_size=1, max_size=4))
def test_wick_matches_sampling(seed, terms):
    f = _random_poly([(e, v) for e, v in terms if sum(e) <= 4], 2)
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((4, 4)) * 0.6
    cov = A @ A.T + 0.1 * np.eye(4)
    mean = rng.standard_normal(4) * 0.3
    exact = wick_expectation(f, MomentSpec(mean, cov))
    stats = RunningStats()
    L = np.linalg.cholesky(cov)
    for c in range(4):
        z = substream(seed, c).standard_normal((50_000, 4)) @ L.T + mean
        vals = np.zeros(len(z))
        for e, co in f.terms.items():
            vals += complex(co).real * np.prod(z ** np.array(e), axis=1)
        stats.add_batch(vals)
    est = stats.estimate()
    assert est.within(exact, 4.0, floor=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(exps, coef), max_size=3), st.lists(st.tuples(exps, coef), max_size=3),
       st.integers(-3, 3))
def test_wick_is_linear(a, b, alpha):
    f, g = _random_poly(a, 2), _random_poly(b, 2)
    m = MomentSpec(np.array([0.1, 0.2, -0.3, 0.4]), np.diag([1.0, 2.0, 0.5, 1.5]))
    lhs = wick_expectation(f * alpha + g, m)
    rhs = alpha * wick_expectation(f, m) + wick_expectation(g, m)
    assert lhs == pytest.approx(rhs, abs=1e-9)
