"""gcd, squarefree parts and divisibility orders, cross-checked modulo primes."""

import random

import pytest
from hypothesis import given, settings

from pncrit.errors import StructuralError
from pncrit.gcd import (PRIMES_30, divides_mod, divisibility_order, exact_quotient, gcd,
                        gcd_mod, is_squarefree, lcm, squarefree_decomposition,
                        squarefree_part, to_mod)
from pncrit.poly import Poly, compose, divides, parse_poly
from pncrit.resultants import jacobian_determinant

from util import polys, product_of_linear, random_linear, random_poly


def P(text, n=3):
    return parse_poly(text, n)


def test_gcd_examples():
    assert gcd(P("x0^2 - x1^2"), P("x0^2 + 2*x0*x1 + x1^2")) == P("x0 + x1")
    assert gcd(P("x0"), P("x1")) == Poly.one(3)
    assert gcd(P("-4*x0*x1"), Poly.zero(3)) == P("x0*x1")


@given(polys(max_degree=3, max_terms=5))
@settings(max_examples=80, deadline=None)
def test_gcd_with_itself_is_normalization(p):
    if p:
        assert gcd(p, p) == p.normalize()


def _modular_agrees(g, a, b):
    """The image of the rational gcd generates the same ideal as the gcd of
    the images, for three primes."""
    for mod in PRIMES_30[:3]:
        gm = gcd_mod(a, b, mod)
        gi = to_mod(g, mod)
        if not (divides_mod(gm, gi, mod) and divides_mod(gi, gm, mod)):
            return False
    return True


def test_gcd_suite_with_modular_cross_check():
    rng = random.Random(10)
    failures = 0
    for _ in range(1000):
        g = random_poly(rng, 3, 2, 3)
        if g.is_zero():
            g = Poly.one(3)
        p, q = random_poly(rng, 3, 2, 3), random_poly(rng, 3, 2, 3)
        a, b = p * g, q * g
        if a.is_zero() or b.is_zero():
            continue
        h = gcd(a, b)
        ok = (divides(g, h) and divides(h, a) and divides(h, b)
              and _modular_agrees(h, a, b))
        failures += not ok
    assert failures == 0


def test_squarefree_examples():
    assert squarefree_part(P("x0^2*x1")) == P("x0*x1")
    J = jacobian_determinant([P("x0^3"), P("x1^3"), P("x2^3")])
    assert squarefree_part(J) == P("x0*x1*x2")


def test_squarefree_suite():
    rng = random.Random(11)
    for _ in range(1000):
        factors = [random_linear(rng, 3, 2) for _ in range(rng.randint(1, 3))]
        exps = [rng.randint(1, 3) for _ in factors]
        p = Poly.one(3)
        for f, e in zip(factors, exps):
            p = p * f ** e
        s = squarefree_part(p)
        distinct = {f.normalize() for f in factors}
        expected = Poly.one(3)
        for f in distinct:
            expected = expected * f
        assert s == expected.normalize()
        assert squarefree_part(s) == s
        assert is_squarefree(s)
        # the image of s still divides the image of p modulo a prime
        assert divides_mod(to_mod(s, PRIMES_30[0]), to_mod(p, PRIMES_30[0]), PRIMES_30[0])


def test_divisibility_order_examples():
    assert divisibility_order(P("x0"), P("x0^3*x1")) == 3
    assert divisibility_order(P("x0 + x1"), P("x2")) == 0
    for d in (2, 3):
        power = [Poly.var(3, i) ** d for i in range(3)]
        pulled = compose(P("x0*x1*x2"), power)
        for i in range(3):
            assert divisibility_order(Poly.var(3, i), pulled) == d


def test_divisibility_order_suite():
    rng = random.Random(12)
    for _ in range(1000):
        c = random_linear(rng, 3, 2)
        k = rng.randint(0, 4)
        rest = random_poly(rng, 3, 2, 3)
        if rest.is_zero() or divides(c, rest):
            continue
        q = c ** k * rest
        assert divisibility_order(c, q) == k
        mod = PRIMES_30[1]
        assert divides_mod(to_mod(c ** k, mod), to_mod(q, mod), mod)


def test_squarefree_decomposition():
    x0, x1, x2 = Poly.gens(3)
    p = (x0 + x1) ** 3 * x2 ** 2 * (x0 - x2)
    dec = squarefree_decomposition(p.scale(-6))
    assert dec == {1: (x0 - x2).normalize(), 2: x2, 3: (x0 + x1).normalize()}


def test_lcm_and_exact_quotient():
    a, b = P("x0*(x0+x1)"), P("x1*(x0+x1)")
    assert lcm(a, b) == P("x0*x1*(x0+x1)").normalize()
    assert exact_quotient(a * b, a) == b
    with pytest.raises(ArithmeticError):
        exact_quotient(P("x0"), P("x1"))


def test_errors():
    with pytest.raises(StructuralError):
        squarefree_part(Poly.zero(2))
    with pytest.raises(StructuralError):
        gcd(Poly.var(2, 0), Poly.var(3, 0))
