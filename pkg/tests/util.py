"""Random generators shared by the test modules."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from pncrit.dynamics import morphism_new
from pncrit.errors import NotAMorphism
from pncrit.poly import Poly, homogeneous_monomials


def random_poly(rng, nvars, max_degree=4, nterms=5, bound=9, rational=False):
    terms = {}
    for _ in range(nterms):
        deg = rng.randint(0, max_degree)
        exp = [0] * nvars
        for _ in range(deg):
            exp[rng.randrange(nvars)] += 1
        c = rng.randint(-bound, bound)
        if rational:
            c = Fraction(c, rng.randint(1, bound))
        terms[tuple(exp)] = c
    return Poly(nvars, terms)


def random_form(rng, nvars, degree, bound=5, density=1.0):
    terms = {}
    for m in homogeneous_monomials(nvars, degree):
        if rng.random() <= density:
            terms[m] = rng.randint(-bound, bound)
    p = Poly(nvars, terms)
    return p if p else Poly.var(nvars, 0) ** degree


def random_linear(rng, nvars, bound=3):
    while True:
        p = Poly(nvars, {tuple(int(i == j) for j in range(nvars)): rng.randint(-bound, bound)
                         for i in range(nvars)})
        if p:
            return p


def random_morphism(n, d, rng, bound=5):
    while True:
        try:
            return morphism_new(n, d, [random_form(rng, n + 1, d, bound) for _ in range(n + 1)])
        except NotAMorphism:
            continue


def product_of_linear(rng, nvars, count, bound=2):
    p = Poly.one(nvars)
    for _ in range(count):
        p = p * random_linear(rng, nvars, bound)
    return p


@st.composite
def polys(draw, nvars=3, max_degree=4, max_terms=6, bound=20, rational=True):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exp = tuple(draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars)))
        if sum(exp) > max_degree:
            continue
        num = draw(st.integers(-bound, bound))
        den = draw(st.integers(1, bound)) if rational else 1
        terms[exp] = Fraction(num, den)
    return Poly(nvars, terms)


def seeds():
    return st.integers(0, 2 ** 32 - 1).map(random.Random)
