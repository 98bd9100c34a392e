import random

import pytest

from pncrit import caps
from pncrit.constructions import (hyperplane_coefficient, nonpcf_family, p1_map, phi_iterate,
                                  power_map, symmetric_power)
from pncrit.dynamics import Hypersurface
from pncrit.errors import ResourceCapExceeded
from pncrit.ideals import Ideal, radical_membership
from pncrit.pcf import (PcfType, containment, detect_pcf_type, orbit_members, orbit_report,
                        postcritical_orbit, verify_certificate)
from pncrit.poly import parse_poly

from util import product_of_linear


def H(text, n=3):
    return Hypersurface(parse_poly(text, n))


def test_containment_examples():
    assert containment(H("x0"), H("x0*x1"))
    assert not containment(H("x0*x1"), H("x0"))


def test_containment_matches_radical_membership():
    rng = random.Random(50)
    for _ in range(100):
        a = Hypersurface.of(product_of_linear(rng, 3, rng.randint(1, 2)))
        b = Hypersurface.of(product_of_linear(rng, 3, rng.randint(1, 2)) *
                            (a.form if rng.random() < 0.5 else parse_poly("1", 3)))
        assert containment(a, b) == radical_membership(b.form, Ideal([a.form]))


def test_power_map_orbit_is_constant():
    orbit = postcritical_orbit(power_map(2, 2), 4)
    assert orbit.degrees == [3]
    assert orbit.stop_reason == "cycle"
    assert orbit.members[0] == H("x0*x1*x2")
    _, members = orbit_members(power_map(2, 2), 4)
    assert members == [H("x0*x1*x2")] * 4


@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_power_maps_are_periodic(n, d):
    cert = detect_pcf_type(power_map(n, d), 4, 2)
    assert cert.type == PcfType(1, 0)
    assert cert.check()


def _moving_line(member):
    """The factor of x0*x1*x2-type members other than x1*x2: {x0 = c x1}."""
    form = member.form
    line = form.__class__(3, {(e[0], e[1] - 1, 0): v for e, v in form.terms.items()})
    return hyperplane_coefficient(Hypersurface.of(line))


def test_family_orbit_follows_the_hyperplane_recursion():
    # f_t maps {x0 = c x1} to {x0 = (c^2 - t) x1}; H_0 = {x0 = 0} starts at c = -t
    for t in (1, -1, 2, 3):
        f = nonpcf_family(2, 2, t)
        _, members = orbit_members(f, 5)
        c = -t
        for member in members:
            if c != 0:
                assert _moving_line(member) == c
            else:
                assert member == H("x0*x1*x2")
            c = c * c - t


def test_family_t_one_is_periodic_of_period_two():
    cert = detect_pcf_type(nonpcf_family(2, 2, 1), 6, 3)
    assert cert.type == PcfType(2, 0)
    assert verify_certificate(nonpcf_family(2, 2, 1), cert, 6, 3)


def test_family_t_minus_one_has_no_type_in_range():
    f = nonpcf_family(2, 2, -1)
    assert detect_pcf_type(f, 6, 3) is None
    report = orbit_report(f, 8, 6, 3)
    assert report["type"] is None
    assert report["degrees"] == [3] * 8
    _, members = orbit_members(f, 6)
    assert [_moving_line(m) for m in members] == [1, 2, 5, 26, 677, 458330]


def test_phi_orbit():
    assert [phi_iterate(1, k) for k in range(1, 5)] == [2, 6, 42, 1806]


def test_symmetric_power_types():
    cert = detect_pcf_type(symmetric_power(p1_map("z^2"), 2), 4, 3)
    assert cert.type == PcfType(1, 1)
    F = symmetric_power(p1_map("z^2-1"), 2)
    cert = detect_pcf_type(F, 4, 3)
    assert cert.type == PcfType(2, 1)
    assert verify_certificate(F, cert, 4, 3)
    orbit = postcritical_orbit(F, 4)
    assert orbit.stop_reason in ("cycle", "containment")


def test_orbit_report_schema():
    report = orbit_report(power_map(2, 2), 4, 4, 2, seed=3)
    assert report["type"] == [1, 0]
    assert report["degrees"] == [3]
    assert report["bounds"] == {"K": 4, "L": 2, "M": 4}
    assert report["seed"] == 3
    assert report["containment"] == [[True, True], [True, True]]
    assert set(report) >= {"n", "d", "map_hash", "certificate", "timings_ms", "caps_hit"}


def test_degree_bound_along_orbit():
    f = symmetric_power(p1_map("z^2-1"), 2)
    orbit = postcritical_orbit(f, 4)
    degs = [orbit.critical.degree] + orbit.degrees
    assert all(b <= f.d ** (f.n - 1) * a for a, b in zip(degs, degs[1:]))


def test_search_bounds_respect_caps():
    with caps.using(caps.Caps(K=2, L=1, M=2)):
        with pytest.raises(ResourceCapExceeded):
            detect_pcf_type(power_map(2, 2), 3, 1)
        assert detect_pcf_type(power_map(2, 2), 2, 1).type == PcfType(1, 0)
    with caps.using(caps.Caps(K=2, L=1, M=1)):
        with pytest.raises(ResourceCapExceeded):
            detect_pcf_type(power_map(2, 2), 2, 1)
