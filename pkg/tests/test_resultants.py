import itertools
import random
from fractions import Fraction

from pncrit.ideals import Ideal, projective_is_empty
from pncrit.poly import Poly, parse_poly
from pncrit.resultants import (bareiss_det, jacobian_determinant, macaulay_resultant,
                               sylvester_resultant)

from util import random_form


def leibniz_det(M):
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = Fraction(-1) ** inversions
        for i in range(n):
            term *= M[i][perm[i]]
        total += term
    return total


def test_bareiss_matches_leibniz():
    rng = random.Random(20)
    for _ in range(100):
        n = rng.randint(1, 5)
        M = [[Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(n)]
             for _ in range(n)]
        assert bareiss_det(M) == leibniz_det(M)
    for _ in range(20):
        n = rng.randint(1, 5)
        M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        assert bareiss_det(M) == leibniz_det(M)


def test_jacobian_matches_cofactor_expansion():
    rng = random.Random(21)
    for _ in range(10):
        F = [random_form(rng, 3, 2, 3) for _ in range(3)]
        J = [[f.derivative(j) for j in range(3)] for f in F]
        cof = (J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
               - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
               + J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]))
        assert jacobian_determinant(F) == cof


def test_sylvester_examples():
    s, t = Poly.gens(2)
    g = s ** 2 - t ** 2
    assert abs(sylvester_resultant(g, s - t.scale(2), 0, 1).constant_value()) == 3
    rng = random.Random(22)
    for _ in range(10):
        h = random_form(rng, 2, rng.randint(1, 3))
        assert sylvester_resultant(h, h, 0, 1).is_zero()


def test_sylvester_with_parameters():
    # variables a, b, c, u, v, s, t
    names = ["a", "b", "c", "u", "v", "s", "t"]
    g = parse_poly("a*s^2 + b*s*t + c*t^2", names=names)
    h = parse_poly("v*s - u*t", names=names)
    res = sylvester_resultant(g, h, 5, 6)
    expected = parse_poly("a*u^2 + b*u*v + c*v^2", names=names)
    assert res == expected or res == -expected


def test_macaulay_examples():
    x = Poly.gens(3)
    assert macaulay_resultant([x[0] ** 2, x[1] ** 2, x[2] ** 2]) != 0
    assert macaulay_resultant([x[0] ** 2, x[0] * x[1], x[2] ** 2]) == 0


def test_macaulay_agrees_with_groebner_emptiness():
    rng = random.Random(23)
    zeros = 0
    for trial in range(50):
        F = [random_form(rng, 3, 2, 2, density=0.5) for _ in range(3)]
        if trial % 5 == 0:
            # force a common zero at [1:0:0]
            F = [Poly(3, {e: c for e, c in f.terms.items() if e != (2, 0, 0)}) or Poly.var(3, 1) ** 2
                 for f in F]
        res = macaulay_resultant(F)
        empty = projective_is_empty(Ideal(F, 3))
        assert (res != 0) == empty
        zeros += res == 0
    assert zeros >= 10
