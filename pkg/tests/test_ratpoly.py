from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levymart.errors import InvalidArgumentError
from levymart.ratpoly import MultiPoly, format_rational, make_rational, parse_rational, poly_derivative, poly_eval, poly_mul

TX = ("t", "x")
t, x = MultiPoly.gens(TX)


def test_make_rational_normalises():
    assert make_rational(2, 4) == Fraction(1, 2)
    assert make_rational(-3, -6) == Fraction(1, 2)
    with pytest.raises(InvalidArgumentError):
        make_rational(5, 0)


def test_parse_and_format_roundtrip():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(7) == 7
    assert format_rational(Fraction(1)) == "1/1"
    with pytest.raises(InvalidArgumentError):
        parse_rational(0.5)
    with pytest.raises(InvalidArgumentError):
        parse_rational(True)


def test_products():
    assert poly_mul(x - t, x + t) == x * x - t * t
    assert poly_mul(x - t, MultiPoly.constant(TX, 1)) == x - t
    assert (x - t) ** 2 == x * x - 2 * x * t + t * t


def test_mismatched_variables_rejected():
    with pytest.raises(InvalidArgumentError):
        poly_mul(MultiPoly.var(("t",), "t"), x)


def test_derivatives():
    p = t ** 3 + 3 * t ** 2 + t
    assert poly_derivative(p, "t") == 3 * t ** 2 + 6 * t + 1
    assert poly_derivative(MultiPoly.constant(TX, 5), "x").is_zero()
    assert poly_derivative(x * x - 2 * x * t, "x") == 2 * x - 2 * t


def test_evaluation():
    p = x * x - t
    partial = poly_eval(p, {"t": 1})
    assert partial == MultiPoly.var(("x",), "x") ** 2 - 1
    assert poly_eval(p, {"x": 2, "t": 1}) == 3
    assert poly_eval(p, {}) == p


def test_json_roundtrip():
    p = x ** 3 * Fraction(2, 3) - t * x + 5
    assert MultiPoly.from_json(p.to_json()) == p


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), small), max_size=5).map(
    lambda ts: MultiPoly(TX, {(a, b): c for a, b, c in ts})
)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert (p - p).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys, polys, small, small)
def test_evaluation_is_a_homomorphism(p, q, a, b):
    env = {"t": a, "x": b}
    assert poly_eval(p * q, env) == poly_eval(p, env) * poly_eval(q, env)
    assert poly_eval(p + q, env) == poly_eval(p, env) + poly_eval(q, env)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_leibniz_rule(p, q):
    assert poly_derivative(p * q, "x") == poly_derivative(p, "x") * q + p * poly_derivative(q, "x")
