"""Exact polynomial arithmetic: hand values plus algebraic property sweeps."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from algforge.poly import Poly, poly_sum

X = Poly.variable(2, 0)
Y = Poly.variable(2, 1)


def test_construction_normalizes_zero_terms():
    p = Poly(2, {(1, 0): Fraction(0), (0, 1): Fraction(3)})
    assert p == Y * 3
    assert Poly.monomial(2, (2, 1), 0).is_zero()


def test_binomial_square():
    assert (X + Y) ** 2 == X * X + X * Y * 2 + Y * Y


def test_pow_zero_is_one():
    assert (X * Y - 7) ** 0 == Poly.const(2, 1)


def test_scalar_mixing():
    assert X * Fraction(1, 2) + X * Fraction(1, 2) == X
    assert 3 - X == Poly.const(2, 3) - X


def test_degrees():
    p = X * X * Y + X
    assert p.total_degree() == 3
    assert p.min_degree() == 1
    assert p.degree_in(0) == 2
    assert p.degree_in(1) == 1
    assert Poly.zero(2).total_degree() == -1


def test_partial_derivative():
    p = X * X * Y - Y * 5
    assert p.partial(0) == X * Y * 2
    assert p.partial(1) == X * X - 5


def test_eval_and_substitute():
    p = X * X + Y * 3
    assert p.eval_at([2, 1]) == 7
    assert p.subs_scalar(0, 2) == Y * 3 + 4
    assert p.subs_scalar(1, Fraction(1, 3)) == X * X + 1


def test_integrate_unit_interval():
    # integral over [0,1] in the second variable: x^2*y^2 + y -> x^2/3 + 1/2
    p = X * X * Y * Y + Y
    q = p.integrate_unit(1)
    assert q == X * X * Fraction(1, 3) + Fraction(1, 2)
    assert q.degree_in(1) == 0


def test_extend_and_drop_var():
    p = X * Y + X
    ext = p.extend(1)
    assert ext.nvars == 3
    assert ext.drop_var(2) == p
    at_zero = (ext * Poly.variable(3, 2)).subs_scalar(2, 0)
    assert at_zero.is_zero()


def test_to_text_is_canonical():
    p = Y * Y - X * 2 + 1
    assert p.to_text(("x", "y")) == "y^2 - 2*x + 1"
    assert Poly.zero(2).to_text(("x", "y")) == "0"
    assert (X * Fraction(3, 4)).to_text(("x", "y")) == "3/4*x"


def test_poly_sum():
    assert poly_sum(2, [X, Y, X]) == X * 2 + Y
    assert poly_sum(2, []).is_zero()


coeffs = st.integers(min_value=-4, max_value=4).map(Fraction)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coeffs, max_size=4).map(lambda d: Poly(2, d))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p + Poly.zero(2) == p
    assert p * Poly.const(2, 1) == p


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_partial_is_a_derivation(p, q):
    for var in (0, 1):
        assert (p * q).partial(var) == p.partial(var) * q + p * q.partial(var)


@settings(max_examples=60, deadline=None)
@given(polys, st.integers(-3, 3), st.integers(-3, 3))
def test_eval_is_a_ring_map(p, a, b):
    q = p * p - p * 2
    assert q.eval_at([a, b]) == p.eval_at([a, b]) ** 2 - 2 * p.eval_at([a, b])
