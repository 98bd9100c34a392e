import dataclasses
import random
from fractions import Fraction

import pytest

from pncrit.constructions import (BranchWitness, P1Portrait, critical_portrait_p1,
                                  elementary_symmetric_point, hyperplane_construction,
                                  local_critical_factor, nonpcf_family, p1_map,
                                  pcf_type_prediction, power_map, random_automorphism,
                                  symmetric_power, verify_minimal_branching,
                                  verify_roadmap_hypotheses)
from pncrit.dynamics import ProjPoint, critical_locus, fiber_divisor, multiplicity_along
from pncrit.errors import (IrrationalCriticalPoint, OrbitBudgetExceeded, StructuralError)
from pncrit.pcf import PcfType
from pncrit.poly import Poly, parse_poly


def test_power_map():
    f = power_map(2, 2)
    assert [str(c) for c in f.coords] == ["x0^2", "x1^2", "x2^2"]
    with pytest.raises(StructuralError):
        power_map(0, 2)


@pytest.mark.parametrize("n,d,e", [(2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 3, 3)])
def test_hyperplane_fiber_shape(n, d, e):
    w = hyperplane_construction(n, d, e, seed=0)
    assert len(w.simple_points) == d ** n - e
    assert w.p == w.q == ProjPoint([0] * n + [1])
    div = fiber_divisor(w.map, w.q)
    assert dict(div.points) == {w.p: e, **{s: 1 for s in w.simple_points}}


def test_hyperplane_forms_follow_the_recipe():
    w = hyperplane_construction(2, 3, 2, seed=0)
    X1, X2, X3 = Poly.gens(3)
    assert w.forms[0][:2] == ((1, 0, 0), (1, -1, 0))
    assert w.forms[1][0] == (0, 1, 0)
    assert w.map.coords[2] == (X3 ** 3).normalize() or w.map.coords[2] == -(X3 ** 3)
    for i, row in enumerate(w.forms):
        prod = Poly.one(3)
        for v in row:
            prod = prod * sum((x.scale(c) for x, c in zip((X1, X2, X3), v)), Poly.zero(3))
        assert prod == w.map.coords[i] or prod == -w.map.coords[i]


def test_hyperplane_construction_is_deterministic():
    a = hyperplane_construction(2, 3, 2, seed=5)
    b = hyperplane_construction(2, 3, 2, seed=5)
    assert a.map == b.map and a.simple_points == b.simple_points


def test_hyperplane_parameter_validation():
    with pytest.raises(StructuralError):
        hyperplane_construction(2, 2, 3)
    with pytest.raises(StructuralError):
        hyperplane_construction(2, 1, 2)


GRID = [(n, d, e) for n in (1, 2) for d in (2, 3) for e in range(2, d + 1)] + [(3, 2, 2)]


@pytest.mark.parametrize("n,d,e", GRID)
def test_construction_passes_verification(n, d, e):
    for seed in (0, 1):
        report = verify_minimal_branching(hyperplane_construction(n, d, e, seed=seed), seed=seed)
        assert report.all_pass, report.to_json()


def test_verification_report_contents():
    w = hyperplane_construction(2, 2, 2, seed=0)
    report = verify_minimal_branching(w)
    names = [c.name for c in report.checks]
    assert names == ["fiber", "critical_membership", "critical_smooth_at_p",
                     "multiplicity_along", "branch_smooth_at_q"]
    factor, k = local_critical_factor(w.map, w.p)
    assert multiplicity_along(w.map, factor) == 2


def test_triple_branching_is_singular_at_p():
    report = verify_minimal_branching(hyperplane_construction(2, 3, 3, seed=0))
    assert report["fiber"].passed
    assert not report["critical_smooth_at_p"].applicable
    assert not report["critical_smooth_at_p"].passed     # the critical curve is singular at p


def test_corrupted_witness_fails():
    w = hyperplane_construction(2, 2, 2, seed=0)
    bad = dataclasses.replace(w, p=w.simple_points[0],
                              simple_points=(w.p,) + w.simple_points[1:])
    report = verify_minimal_branching(bad)
    assert not report.all_pass and not report["fiber"].passed


def test_power_map_is_not_minimally_branched():
    pt = ProjPoint([0, 0, 1])
    report = verify_minimal_branching(BranchWitness(power_map(2, 2), pt, pt, (), 2))
    assert not report["fiber"].passed
    assert report["fiber"].detail["multiplicities"] == [4]


def test_witness_json_round_trip():
    w = hyperplane_construction(2, 2, 2, seed=0)
    back = BranchWitness.from_json(w.to_json())
    assert (back.map, back.p, back.q, back.simple_points, back.e) == \
        (w.map, w.p, w.q, w.simple_points, w.e)


def test_roadmap_hypotheses():
    w = hyperplane_construction(2, 2, 2, seed=0)
    assert verify_roadmap_hypotheses(w.map, 1, witness=w).all_pass
    report = verify_roadmap_hypotheses(power_map(2, 2), 1)
    assert not report["generically_injective"].passed
    assert report["generically_injective"].detail["degree_ratio"] == "2"
    alpha = random_automorphism(2, seed=1)
    report = verify_roadmap_hypotheses(w.map, 2, witness=w, alpha=alpha)
    assert report["alpha_degree_ratio"].detail["after"] == "1"
    assert report.all_pass


def test_p1_portraits():
    def table(text):
        return {p: (k, l) for p, k, l in critical_portrait_p1(p1_map(text)).critical_points}

    zero, inf = ProjPoint([0, 1]), ProjPoint([1, 0])
    assert table("z^2") == {zero: (1, 0), inf: (1, 0)}
    assert table("z^2-1") == {zero: (2, 0), inf: (1, 0)}
    assert table("z^2-2") == {zero: (1, 2), inf: (1, 0)}
    assert table("s^2, t^2") == table("z^2")
    with pytest.raises(IrrationalCriticalPoint):
        critical_portrait_p1(p1_map("z^3 + 2*z"))
    with pytest.raises(OrbitBudgetExceeded):
        critical_portrait_p1(p1_map("z^2+1"), max_steps=6)


def test_type_prediction():
    assert pcf_type_prediction(critical_portrait_p1(p1_map("z^2"))) == PcfType(1, 1)
    assert pcf_type_prediction(critical_portrait_p1(p1_map("z^2-1"))) == PcfType(2, 1)
    assert pcf_type_prediction(critical_portrait_p1(p1_map("z^2-2"))) == PcfType(1, 2)
    with pytest.raises(StructuralError):
        pcf_type_prediction(P1Portrait(()))


def test_symmetric_square_of_squaring():
    F = symmetric_power(p1_map("z^2"), 2)
    a, b, c = Poly.gens(3)
    assert list(F.coords) == [a ** 2, c.scale(2) * a - b ** 2, c ** 2]


def _roots_of(point):
    """Rational roots [alpha:1] (or infinity) of sum a_i s^(n-i) t^i."""
    from pncrit.zerodim import rational_roots
    coeffs = point.coords
    n = len(coeffs) - 1
    g = Poly(1, {(n - i,): c for i, c in enumerate(coeffs) if c})
    return sorted(rational_roots(g))


@pytest.mark.parametrize("text,fn", [("z^2", lambda z: z * z), ("z^2-1", lambda z: z * z - 1)])
def test_symmetric_power_maps_roots(text, fn):
    F = symmetric_power(p1_map(text), 2)
    rng = random.Random(60)
    for _ in range(20):
        al, be = (Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2))
        g = elementary_symmetric_point([(al, 1), (be, 1)])
        image = F(g)
        assert image == elementary_symmetric_point([(fn(al), 1), (fn(be), 1)])
        if fn(al) != fn(be):
            assert _roots_of(image) == sorted({fn(al), fn(be)})


@pytest.mark.parametrize("text,n", [("z^2-1", 2), ("z^2-1", 3), ("z^3-3*z", 2), ("s^2+s*t, t^2-2*s*t", 2)])
def test_commuting_square(text, n):
    f1 = p1_map(text)
    F = symmetric_power(f1, n)
    assert F.d == f1.d
    rng = random.Random(61)
    for _ in range(50):
        pts = [ProjPoint([rng.randint(-5, 5), rng.randint(1, 4)]) if rng.random() < 0.9
               else ProjPoint([1, 0]) for _ in range(n)]
        lhs = elementary_symmetric_point([f1(p).coords for p in pts])
        rhs = F(elementary_symmetric_point([p.coords for p in pts]))
        assert lhs == rhs


def test_family_helpers():
    f = nonpcf_family(2, 3, 2)
    assert f.coords[0] == parse_poly("x0^3 - 2*x1^3", 3)
    assert critical_locus(f)[1].degree == 3
