"""Endomorphisms of projective space and their critical geometry.

A :class:`Morphism` is n+1 forms of a common degree d without a common
projective zero.  Hypersurfaces are stored as canonical squarefree forms, so
structural equality is equality of varieties.
"""

import dataclasses
import functools
import hashlib
import json
import math
import random
from fractions import Fraction

from . import caps, interp
from .errors import (DegreeMismatch, EliminationNotPrincipal, GenericityExhausted,
                     IrrationalFiberPoint, NotAMorphism, NotHomogeneous, NotSmooth,
                     ResourceCapExceeded, StructuralError)
from .gcd import divisibility_order, squarefree_part
from .ideals import Ideal, dimension, elimination_ideal, projective_is_empty
from .poly import GREVLEX, Poly, compose, default_names, divides, parse_poly
from .resultants import jacobian_determinant
from .zerodim import solve_zero_dim


# ---------------------------------------------------------------------------
# value types

class ProjPoint:
    """A point of P^n with its canonical representative: primitive integer
    coordinates whose first nonzero entry is positive."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        vals = [Fraction(c) for c in coords]
        if not vals or not any(vals):
            raise StructuralError("a projective point needs a nonzero coordinate")
        den = math.lcm(*(v.denominator for v in vals))
        ints = [int(v * den) for v in vals]
        g = math.gcd(*ints)
        first = next(v for v in ints if v)
        if first < 0:
            g = -g
        self.coords = tuple(v // g for v in ints)

    @property
    def n(self):
        return len(self.coords) - 1

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(("ProjPoint", self.coords))

    def __lt__(self, other):
        return self.coords < other.coords

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"

    def to_json(self):
        return list(self.coords)

    @classmethod
    def from_json(cls, data):
        return cls([Fraction(str(c)) for c in data])


class Hypersurface:
    """A reduced hypersurface, stored as a canonical squarefree form."""

    __slots__ = ("form",)

    def __init__(self, form, check=True):
        if not form or form.is_constant():
            raise StructuralError("a hypersurface needs a nonconstant form")
        if not form.is_homogeneous():
            raise NotHomogeneous("hypersurface forms must be homogeneous")
        form = form.normalize()
        if check and squarefree_part(form) != form:
            raise StructuralError("hypersurface form is not squarefree")
        self.form = form

    @classmethod
    def of(cls, p):
        """The reduced hypersurface V(p)."""
        return cls(squarefree_part(p), check=False)

    @property
    def degree(self):
        return self.form.degree()

    @property
    def n(self):
        return self.form.nvars - 1

    def contains(self, point):
        return self.form.evaluate(list(point)) == 0

    def __eq__(self, other):
        return isinstance(other, Hypersurface) and self.form == other.form

    def __hash__(self):
        return hash(("Hypersurface", self.form))

    def __repr__(self):
        return f"Hypersurface({self.form})"

    def to_json(self):
        return {"n": self.n, "form": str(self.form)}

    @classmethod
    def from_json(cls, data):
        n = int(data["n"])
        return cls.of(parse_poly(data["form"], n + 1))


class Morphism:
    """A degree-d endomorphism of P^n, jointly normalized to primitive integer
    coordinates with a positive leading coefficient in the first nonzero one."""

    def __init__(self, n, d, coords):
        self.n = n
        self.d = d
        self.coords = _joint_normalize(coords)
        self._cache = {}

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.coords == other.coords

    def __hash__(self):
        return hash(("Morphism", self.coords))

    def __repr__(self):
        return f"Morphism(n={self.n}, d={self.d}, [{', '.join(map(str, self.coords))}])"

    @property
    def nvars(self):
        return self.n + 1

    def __call__(self, point):
        pt = list(point)
        return ProjPoint([f.evaluate(pt) for f in self.coords])

    def to_json(self):
        return {"n": self.n, "d": self.d, "coords": [str(f) for f in self.coords], "params": {}}

    def map_hash(self):
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @classmethod
    def from_json(cls, data):
        n, d = int(data["n"]), int(data["d"])
        params = data.get("params") or {}
        names = default_names(n + 1) + list(params)
        values = [Fraction(str(v)) for v in params.values()]
        subs = [Poly.var(n + 1, i) for i in range(n + 1)] + [Poly.constant(n + 1, v) for v in values]
        coords = []
        for text in data["coords"]:
            p = parse_poly(text, len(names), names)
            coords.append(compose(p, subs) if params else p)
        return morphism_new(n, d, coords)

    def cached(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]


def _joint_normalize(coords):
    coeffs = [Fraction(c) for f in coords for c in f.terms.values()]
    if not coeffs:
        return tuple(coords)
    den = math.lcm(*(c.denominator for c in coeffs))
    num = math.gcd(*(c.numerator for c in coeffs))
    scale = Fraction(den, num)
    lead = next(f for f in coords if f).leading_coefficient(GREVLEX)
    if lead < 0:
        scale = -scale
    return tuple(f.scale(scale) for f in coords)


@dataclasses.dataclass(frozen=True)
class FiberDivisor:
    target: ProjPoint
    points: tuple          # ((ProjPoint, multiplicity), ...), sorted

    @property
    def degree(self):
        return sum(m for _, m in self.points)

    def multiplicities(self):
        return sorted(m for _, m in self.points)

    def multiplicity_of(self, point):
        point = point if isinstance(point, ProjPoint) else ProjPoint(point)
        return dict(self.points).get(point, 0)

    def to_json(self):
        return {"target": self.target.to_json(),
                "points": [{"point": p.to_json(), "multiplicity": m} for p, m in self.points]}


@dataclasses.dataclass(frozen=True)
class FixedLocus:
    ideal: Ideal
    projective_dimension: int
    points: tuple          # rational fixed points, or None if not zero-dimensional
    count: int             # distinct fixed points over the algebraic closure
    length: int            # fixed points counted with multiplicity


# ---------------------------------------------------------------------------
# construction and composition

def morphism_new(n, d, coords, check=True):
    """Validate ``coords`` as a degree-d endomorphism of P^n."""
    coords = list(coords)
    if n < 1:
        raise StructuralError("n must be at least 1")
    if len(coords) != n + 1:
        raise StructuralError(f"P^{n} needs {n + 1} coordinate forms, got {len(coords)}")
    for f in coords:
        if f.nvars != n + 1:
            raise StructuralError(f"coordinate {f} is not in {n + 1} variables")
        if not f:
            raise NotAMorphism("a coordinate form is identically zero")
        if not f.is_homogeneous():
            raise NotHomogeneous(f"coordinate {f} is not homogeneous")
        if f.degree() != d:
            raise DegreeMismatch(f"coordinate {f} has degree {f.degree()}, expected {d}")
    if d < 1:
        raise DegreeMismatch("degree must be at least 1")
    caps.check_degree(d, "map")
    if check and not projective_is_empty(Ideal(coords)):
        raise NotAMorphism("the coordinate forms have a common projective zero")
    return Morphism(n, d, coords)


def compose_maps(f, g):
    """The morphism f o g."""
    if f.n != g.n:
        raise StructuralError("maps act on different projective spaces")
    caps.check_degree(f.d * g.d, "composite map")
    return Morphism(f.n, f.d * g.d, [compose(c, list(g.coords)) for c in f.coords])


def iterate(f, m):
    """The m-th iterate f^m (m >= 1)."""
    if m < 1:
        raise StructuralError("iterate count must be positive")
    caps.check_degree(f.d ** m, "iterate")
    out = f
    for _ in range(m - 1):
        out = compose_maps(out, f)
    return out


# ---------------------------------------------------------------------------
# critical and branch loci

def critical_locus(f):
    """``(raw Jacobian determinant, reduced critical hypersurface)``."""
    def compute():
        raw = jacobian_determinant(list(f.coords))
        if not raw:
            raise AssertionError("Jacobian determinant vanishes identically")
        assert raw.degree() == (f.n + 1) * (f.d - 1)
        if raw.is_constant():
            return raw, None
        return raw, Hypersurface.of(raw)
    return f.cached("critical", compute)


def pullback(f, H):
    form = H.form if isinstance(H, Hypersurface) else H
    return compose(form, list(f.coords))


def _graph_elimination(f, H):
    """Generators of the elimination ideal of (H(x), y_i - f_i(x)) in y."""
    n1 = f.nvars
    N = 2 * n1
    xs = list(range(n1))
    X = [c.embed(N, xs) for c in f.coords]
    gens = [H.form.embed(N, xs)] + [Poly.var(N, n1 + i) - X[i] for i in range(n1)]
    weights = (1,) * n1 + (f.d,) * n1
    return elimination_ideal(Ideal(gens), xs, weights=weights)


def _image_method(f):
    # elimination cost swings by two orders of magnitude with coefficient
    # growth already on P^2; interpolation is certified exactly either way
    return "elimination" if f.n == 1 else "interpolation"


def image_hypersurface(f, H, method="auto", seed=0):
    """Reduced image f(V(H)) with the containment and degree contracts checked."""
    if H.n != f.n:
        raise StructuralError("hypersurface and map live on different spaces")
    if method == "auto":
        method = _image_method(f)
    key = ("image", H, method)
    return f.cached(key, lambda: _image(f, H, method, seed))


def _image(f, H, method, seed):
    bound = f.d ** (f.n - 1) * H.degree
    caps.check_degree(bound * f.d, "image pullback")
    F = list(f.coords)

    def contains(h):
        return divides(H.form, compose(h, F))

    if method == "elimination":
        gens = _graph_elimination(f, H)
        if len(gens) != 1:
            raise EliminationNotPrincipal(
                f"elimination ideal has {len(gens)} generators", generators=gens)
        h = squarefree_part(gens[0])
        if not contains(h):
            raise AssertionError(f"V({H.form}) is not contained in the pullback of its image")
    elif method == "interpolation":
        h = interp.interpolate_image(F, H.form, bound, seed=seed, verify=contains)
        if h is None:
            raise ResourceCapExceeded("modular image reconstruction did not stabilise",
                                      cap="primes")
        h = squarefree_part(h)
    else:
        raise StructuralError(f"unknown image method {method!r}")
    if h.degree() > bound:
        raise AssertionError(f"image degree {h.degree()} exceeds d^(n-1)*deg = {bound}")
    return Hypersurface(h, check=False)


def branch_locus(f):
    _, reduced = critical_locus(f)
    if reduced is None:
        raise StructuralError("a degree-1 map has no critical locus")
    return image_hypersurface(f, reduced)


def degree_ratio(f, H):
    """``d^(n-1) deg(H) / deg(f(H))``."""
    h = image_hypersurface(f, H)
    return Fraction(f.d ** (f.n - 1) * H.degree, h.degree)


def multiplicity_along(f, c):
    """Order of vanishing of the pulled-back image equation along V(c)."""
    if c.is_constant():
        raise StructuralError("multiplicity along a constant")
    raw, _ = critical_locus(f)
    if not divides(c, raw):
        raise StructuralError(f"{c} does not divide the critical determinant")
    h = image_hypersurface(f, Hypersurface.of(c))
    return divisibility_order(c, pullback(f, h))


# ---------------------------------------------------------------------------
# zero-dimensional loci

def _random_chart(nvars, rng, bound=4):
    while True:
        coeffs = [rng.randint(-bound, bound) for _ in range(nvars)]
        if any(coeffs):
            return Poly(nvars, {tuple(int(i == j) for j in range(nvars)): c
                                for i, c in enumerate(coeffs)})


def _solve_in_chart(polys, nvars, expected, rng):
    """Points of the projective scheme V(polys) in a random affine chart
    l = 1 that contains all of them (checked through the total length)."""
    retries = caps.current().fiber_retries
    for _ in range(retries):
        chart = _random_chart(nvars, rng)
        sol = solve_zero_dim(list(polys) + [chart - 1], nvars, rng)
        if sol.length == expected:
            return sol
        if sol.length > expected:
            raise AssertionError(f"scheme length {sol.length} exceeds {expected}")
    raise GenericityExhausted(f"no chart containing every point after {retries} tries",
                              cap="fiber_retries")


def fiber_divisor(f, q, hints=None, seed=0):
    """The fiber f^*(q) as points with scheme multiplicities summing to d^n."""
    q = q if isinstance(q, ProjPoint) else ProjPoint(q)
    if q.n != f.n:
        raise StructuralError("target point has the wrong dimension")
    k = next(i for i, c in enumerate(q.coords) if c)
    F = f.coords
    minors = [F[j].scale(q.coords[k]) - F[k].scale(q.coords[j])
              for j in range(f.nvars) if j != k]
    total = f.d ** f.n
    sol = _solve_in_chart(minors, f.nvars, total, random.Random(seed))
    points = tuple(sorted((ProjPoint(c), m) for c, m in sol.points))
    found = {p for p, _ in points}
    for h in hints or ():
        h = h if isinstance(h, ProjPoint) else ProjPoint(h)
        if f(h) != q:
            raise StructuralError(f"hint {h} does not map to {q}")
        if h not in found:
            raise AssertionError(f"hint {h} was not recovered in the fiber")
    div = FiberDivisor(q, points)
    if div.degree != total:
        raise IrrationalFiberPoint(
            f"rational fiber points account for {div.degree} of {total}")
    _check_ramification_equivalence(f, div)
    return div


def _check_ramification_equivalence(f, div):
    """Simple fiber points are off the critical locus, multiple ones on it."""
    raw, _ = critical_locus(f)
    for p, m in div.points:
        on = raw.evaluate(list(p.coords)) == 0
        if on != (m >= 2):
            raise AssertionError(f"fiber point {p} of multiplicity {m} has critical value "
                                 f"{'zero' if on else 'nonzero'}")


def fixed_point_ideal(f):
    X = Poly.gens(f.nvars)
    F = f.coords
    gens = [X[j] * F[i] - X[i] * F[j] for i in range(f.nvars) for j in range(i + 1, f.nvars)]
    return Ideal(gens, f.nvars)


def fixed_locus(f, seed=0):
    """Fixed-point scheme: ideal, projective dimension and, when finite,
    the rational points and the number of geometric points."""
    if f.d < 2:
        raise StructuralError("fixed loci are computed for d >= 2")
    I = fixed_point_ideal(f)
    proj_dim = dimension(I) - 1
    if proj_dim != 0:
        return FixedLocus(I, proj_dim, None, -1, -1)
    expected = sum(f.d ** i for i in range(f.n + 1))
    sol = _solve_in_chart(I.generators, f.nvars, expected, random.Random(seed))
    points = tuple(sorted(ProjPoint(c) for c, _ in sol.points))
    bound = (f.d + 1) ** f.n
    if sol.distinct > bound:
        raise AssertionError(f"{sol.distinct} fixed points exceed (d+1)^n = {bound}")
    return FixedLocus(I, 0, points, sol.distinct, sol.length)


# ---------------------------------------------------------------------------
# plane curves

def smoothness_check(H):
    form = H.form if isinstance(H, Hypersurface) else H
    gens = [form] + [g for g in form.gradient() if g]
    return projective_is_empty(Ideal(gens, form.nvars))


def plane_curve_genus(H):
    form = H.form if isinstance(H, Hypersurface) else H
    if form.nvars != 3:
        raise StructuralError("genus formula applies to plane curves")
    if not smoothness_check(form):
        raise NotSmooth(f"V({form}) is singular")
    e = form.degree()
    return (e - 1) * (e - 2) // 2
