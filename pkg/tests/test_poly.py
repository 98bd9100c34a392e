import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pncrit.errors import ParseError, StructuralError
from pncrit.poly import (GREVLEX, MonomialOrder, Poly, compose, divide, divides, exact_div,
                         format_poly, homogeneous_monomials, parse_poly)
from pncrit.resultants import jacobian_determinant

from util import polys, random_form, random_poly


def P(text, n=3):
    return parse_poly(text, n)


def test_binomial_square():
    x0, x1 = Poly.gens(2)
    assert (x0 + x1) ** 2 == parse_poly("x0^2 + 2*x0*x1 + x1^2", 2)


def test_evaluate():
    assert P("x0^2*x1").evaluate([2, 3, 1]) == 12
    assert P("1/2*x0 - x2").evaluate([Fraction(1, 3), 0, 1]) == Fraction(-5, 6)


def test_multiplication_commutes():
    rng = random.Random(1)
    for _ in range(200):
        a, b = random_poly(rng, 3), random_poly(rng, 3)
        assert a * b == b * a


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(3)


def test_no_zero_coefficients_are_stored():
    p = P("x0 + x1") - P("x1")
    assert p.terms == {(1, 0, 0): 1}
    assert Poly(2, {(1, 0): 0}).is_zero()


def test_derivatives():
    assert P("x0^3").derivative(0) == P("3*x0^2")
    assert P("x1").derivative(0) == Poly.zero(3)


def test_euler_identity():
    rng = random.Random(2)
    for _ in range(50):
        deg = rng.randint(1, 5)
        p = random_form(rng, 3, deg, density=0.5)
        lhs = sum((Poly.var(3, i) * p.derivative(i) for i in range(3)), Poly.zero(3))
        assert lhs == p.scale(deg)


def test_jacobian_examples():
    assert jacobian_determinant([P("x0^2"), P("x1^2"), P("x2^2")]) == P("8*x0*x1*x2")
    assert jacobian_determinant([P("x0"), P("x1"), P("x2")]) == Poly.one(3)
    J = jacobian_determinant([P("x0^3"), P("x1^3"), P("x2^3")])
    assert J == P("27*x0^2*x1^2*x2^2") and J.degree() == 6


def test_compose_examples():
    power = [P("x0^2"), P("x1^2"), P("x2^2")]
    assert compose(P("x0"), power) == P("x0^2")
    assert compose(P("x0*x1*x2"), power) == P("x0^2*x1^2*x2^2")


def test_compose_degree_multiplies():
    rng = random.Random(3)
    for _ in range(50):
        d, e = rng.randint(1, 3), rng.randint(1, 3)
        p = random_form(rng, 3, e, density=0.6)
        F = [random_form(rng, 3, d) for _ in range(3)]
        r = compose(p, F)
        assert r.is_zero() or (r.is_homogeneous() and r.degree() == e * d)
    p = P("x0^2 + x1*x2")
    F = [P("x0^2+x1^2"), P("x1^2"), P("x2^2 - x0*x1")]
    assert compose(p, F).degree() == 4


def test_compose_matches_pointwise_evaluation():
    rng = random.Random(4)
    for _ in range(30):
        p = random_poly(rng, 3, 4)
        F = [random_poly(rng, 2, 2) for _ in range(3)]
        pt = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(2)]
        inner = [f.evaluate(pt) for f in F]
        assert compose(p, F).evaluate(pt) == p.evaluate(inner)


def test_parse_examples():
    p = P("3/2*x0^2*x1 - x2^3")
    assert p.terms == {(2, 1, 0): Fraction(3, 2), (0, 0, 3): -1}
    assert format_poly(P("x0 + x0")) == "2*x0"
    assert parse_poly("(x0 + 1)^2", 1) == parse_poly("x0^2 + 2*x0 + 1", 1)


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as info:
        parse_poly("x0 + * x1", 2)
    assert info.value.position is not None
    with pytest.raises(StructuralError):
        parse_poly("x5", 2)


@given(polys(nvars=3, max_degree=5, max_terms=8))
@settings(max_examples=500, deadline=None)
def test_parse_format_round_trip(p):
    assert parse_poly(format_poly(p), 3) == p


def test_structural_mismatch():
    with pytest.raises(StructuralError):
        Poly.var(2, 0) + Poly.var(3, 0)


def test_orders_are_total_and_multiplicative():
    monos = homogeneous_monomials(3, 2) + homogeneous_monomials(3, 3)
    for order in (GREVLEX, MonomialOrder("block", split=1)):
        keys = sorted(monos, key=order.key)
        assert len(set(map(order.key, monos))) == len(monos)
        shift = (1, 0, 2)
        shifted = sorted((tuple(a + b for a, b in zip(m, shift)) for m in monos), key=order.key)
        assert shifted == [tuple(a + b for a, b in zip(m, shift)) for m in keys]


def test_division_identity():
    rng = random.Random(5)
    for _ in range(50):
        p = random_poly(rng, 3, 5, 8)
        divisors = [random_poly(rng, 3, 2, 3) for _ in range(2)]
        divisors = [g for g in divisors if not g.is_zero()]
        if not divisors:
            continue
        quots, r = divide(p, divisors)
        assert sum((q * g for q, g in zip(quots, divisors)), r) == p


def test_exact_division():
    a, b = P("x0 + x1"), P("x0 - 2*x2")
    assert exact_div(a * b, b) == a
    assert divides(b, a * b) and not divides(a * a, a * b)


def test_normalize_is_canonical():
    p = P("-2*x0*x1*x2")
    assert p.normalize() == P("x0*x1*x2")
    q = P("3/4*x0 - 3/2*x1")
    assert q.normalize() == P("x0 - 2*x1")
    assert q.scale(-7).normalize() == q.normalize()
