"""Explicit map families and verifiers for their claimed properties."""

import dataclasses
import itertools
import math
import random
from fractions import Fraction

from . import caps
from .dynamics import (Hypersurface, Morphism, ProjPoint, branch_locus, compose_maps,
                       critical_locus, fiber_divisor, image_hypersurface, morphism_new,
                       multiplicity_along, pullback)
from .errors import (IrrationalCriticalPoint, NotAMorphism, OrbitBudgetExceeded,
                     PncritError, SearchExhausted, StructuralError)
from .gcd import divisibility_order, exact_quotient, gcd, squarefree_decomposition
from .linalg import rank, solve
from .pcf import PcfType, containment
from .poly import Poly, compose, divides, parse_poly
from .resultants import jacobian_determinant, sylvester_resultant
from .zerodim import irreducible_factors, rational_roots


# ---------------------------------------------------------------------------
# simple families

def power_map(n, d):
    if n < 1 or d < 2:
        raise StructuralError("power maps need n >= 1 and d >= 2")
    return morphism_new(n, d, [Poly.var(n + 1, i) ** d for i in range(n + 1)])


def nonpcf_family(n, d, t):
    """``[X0^d - t X1^d, X1^d, ..., Xn^d]``."""
    if n < 1 or d < 2:
        raise StructuralError("the family needs n >= 1 and d >= 2")
    X = Poly.gens(n + 1)
    coords = [X[0] ** d - (X[1] ** d).scale(Fraction(t))] + [x ** d for x in X[1:]]
    return morphism_new(n, d, coords)


def phi_iterate(t, k, d=2):
    """``phi^k(t)`` for ``phi(t) = t^d + t``."""
    t = Fraction(t)
    for _ in range(k):
        t = t ** d + t
    return t.numerator if t.denominator == 1 else t


def hyperplane_coefficient(H):
    """For a hyperplane ``x0 = c x1`` return ``c`` (None otherwise)."""
    form = H.form
    if form.degree() != 1:
        return None
    n1 = form.nvars
    e0 = tuple(int(i == 0) for i in range(n1))
    e1 = tuple(int(i == 1) for i in range(n1))
    if set(form.terms) - {e0, e1} or e0 not in form.terms:
        return None
    return -Fraction(form.terms.get(e1, 0)) / Fraction(form.terms[e0])


# ---------------------------------------------------------------------------
# hyperplane construction

@dataclasses.dataclass(frozen=True)
class BranchWitness:
    map: Morphism
    q: ProjPoint
    p: ProjPoint
    simple_points: tuple
    e: int = 2
    forms: tuple = ()        # forms[i][j] = L_{i+1, j+1} (rows 1..n)

    def to_json(self):
        return {"map": self.map.to_json(), "q": self.q.to_json(), "p": self.p.to_json(),
                "simple_points": [pt.to_json() for pt in self.simple_points], "e": self.e}

    @classmethod
    def from_json(cls, data):
        return cls(Morphism.from_json(data["map"]), ProjPoint.from_json(data["q"]),
                   ProjPoint.from_json(data["p"]),
                   tuple(ProjPoint.from_json(pt) for pt in data["simple_points"]),
                   int(data.get("e", 2)))


def dual_vectors(length, rng, through_origin=False, max_box=64):
    """Integer vectors by growing max-norm box (1, 2, 4, ...); each new shell
    is visited in an order permuted by ``rng``."""
    prev = 0
    box = 1
    while box <= max_box:
        shell = []
        span = range(-box, box + 1)
        slots = length - 1 if through_origin else length
        for v in itertools.product(span, repeat=slots):
            if max(map(abs, v)) > prev:
                shell.append(v + (0,) if through_origin else v)
        rng.shuffle(shell)
        yield from shell
        prev, box = box, box * 2
    raise SearchExhausted(f"no admissible linear form with coefficients up to {max_box}",
                          cap="search_box")


def _solve_point(rows):
    """Affine solution (X_1..X_n, with X_{n+1} = 1) of n affine forms, or
    None when the linear parts are dependent."""
    n = len(rows)
    A = [[Fraction(r[j]) for j in range(n)] for r in rows]
    if rank(A) < n:
        return None
    b = [-Fraction(r[n]) for r in rows]
    return tuple(solve(A, b)) + (Fraction(1),)


def _evaluate_form(v, point):
    return sum(Fraction(c) * x for c, x in zip(v, point))


def hyperplane_construction(n, d, e=2, seed=0):
    """A degree-d map of P^n with ``f^*(q) = e p + (d^n - e) simple points``.

    Coordinates are ``X_1..X_{n+1}`` (variables ``x0..xn``), ``q = p =
    [0:...:0:1]`` and ``f_i = prod_j L_{i,j}`` with ``f_{n+1} = X_{n+1}^d``.
    Linear forms are integer vectors of length n+1 (last entry: coefficient
    of ``X_{n+1}``).
    """
    if n < 1 or d < 2 or not 2 <= e <= d:
        raise StructuralError("need n >= 1, d >= 2 and 2 <= e <= d")
    rng = random.Random(seed)
    unit = [tuple(int(i == j) for j in range(n + 1)) for i in range(n)]
    L = [[unit[i]] for i in range(n)]
    # forms through q in row 1.  X1 - X2 only works on the plane: for n >= 3
    # it shares the subspace {X1 = X2 = 0} with X1, which duplicates every
    # P_sigma with sigma(2) = 1, so general position is required instead.
    if n == 1:
        L[0].extend([unit[0]] * (e - 1))
    elif e == 2 and n == 2:
        L[0].append(tuple(1 if j == 0 else -1 if j == 1 else 0 for j in range(n + 1)))
    else:
        through = [unit[0]]
        coord = [u[:n] for u in unit[1:]]
        for v in dual_vectors(n + 1, rng, through_origin=True):
            if len(through) == e:
                break
            if v[0] == 0:
                continue      # must not contain the X_1 axis through q
            cand = through + [v]
            pool = [w[:n] for w in cand] + coord
            if all(rank([list(w) for w in sub]) == n
                   for sub in itertools.combinations(pool, n)):
                through.append(v)
        L[0] = through

    def points_for(k):
        """P_sigma for all sigma with sigma(i) <= k_i (0-based exclusive)."""
        out = {}
        for sigma in itertools.product(*[range(ki) for ki in k]):
            out[sigma] = _solve_point([L[i][s] for i, s in enumerate(sigma)])
        return out

    q_point = tuple([Fraction(0)] * n + [Fraction(1)])
    collide = {tuple([j] + [0] * (n - 1)) for j in range(e)}

    def admissible(pts):
        seen = {}
        for sigma, P in pts.items():
            if P is None:
                return False
            if sigma in collide:
                if P != q_point:
                    return False
                continue
            if P == q_point or P in seen:
                return False
            seen[P] = sigma
        return True

    current = points_for([len(row) for row in L])
    if not admissible(current):
        raise AssertionError("initial forms are not in general position")
    for t in range(n):
        while len(L[t]) < d:
            k = [len(row) for row in L]
            for v in dual_vectors(n + 1, rng):
                if any(_evaluate_form(v, P) == 0 for P in current.values()):
                    continue
                L[t].append(v)
                trial = points_for([len(row) for row in L])
                if admissible(trial):
                    current = trial
                    break
                L[t].pop()
    X = Poly.gens(n + 1)

    def form(v):
        acc = Poly.zero(n + 1)
        for c, x in zip(v, X):
            if c:
                acc = acc + x.scale(c)
        return acc

    coords = []
    for row in L:
        f = Poly.one(n + 1)
        for v in row:
            f = f * form(v)
        coords.append(f)
    coords.append(X[n] ** d)
    try:
        fmap = morphism_new(n, d, coords)
    except NotAMorphism as exc:   # excluded by properness of every system
        raise AssertionError("hyperplane construction produced a non-morphism") from exc
    q = ProjPoint(q_point)
    simple = tuple(sorted({ProjPoint(P) for s, P in current.items() if s not in collide}))
    if len(simple) != d ** n - e:
        raise AssertionError("distinctness table violated")
    return BranchWitness(fmap, q, q, simple, e, tuple(tuple(row) for row in L))


# ---------------------------------------------------------------------------
# verification of minimal branching

@dataclasses.dataclass
class Check:
    name: str
    passed: bool
    applicable: bool = True
    detail: object = None

    def to_json(self):
        return {"name": self.name, "pass": self.passed, "applicable": self.applicable,
                "detail": self.detail}


@dataclasses.dataclass
class VerificationReport:
    checks: list

    @property
    def all_pass(self):
        return all(c.passed for c in self.checks if c.applicable)

    def __getitem__(self, name):
        return next(c for c in self.checks if c.name == name)

    def to_json(self):
        return {"all_pass": self.all_pass, "checks": [c.to_json() for c in self.checks]}


def _gradient_at(form, point):
    return [g.evaluate(list(point)) if g else 0 for g in form.gradient()]


def local_critical_factor(f, p):
    """Squarefree factor of the critical determinant through ``p``, split off
    by ramification multiplicity: returns ``(factor, multiplicity)`` or
    ``(None, None)`` when ``p`` lies on several strata."""
    raw, reduced = critical_locus(f)
    candidates = [a for a in squarefree_decomposition(raw).values()
                  if a.evaluate(list(p.coords)) == 0]
    if len(candidates) != 1:
        return None, None
    rest = candidates[0]
    pulled = pullback(f, image_hypersurface(f, Hypersurface.of(rest)))
    k = 0
    cur = pulled
    while not rest.is_constant():
        cur = exact_quotient(cur, rest)
        k += 1
        higher = gcd(rest, cur)
        exact = exact_quotient(rest, higher).normalize()
        on_exact = not exact.is_constant() and exact.evaluate(list(p.coords)) == 0
        on_higher = not higher.is_constant() and higher.evaluate(list(p.coords)) == 0
        if on_exact and not on_higher:
            return exact, k
        if on_exact and on_higher:
            return None, None
        rest = higher
    return None, None


def verify_minimal_branching(w, seed=0):
    """Checks (i)-(v) for a branch witness; failures are report entries."""
    f, q, p, e = w.map, w.q, w.p, w.e
    raw, reduced = critical_locus(f)
    checks = []
    # (i) fiber divisor
    try:
        div = fiber_divisor(f, q, hints=(p,) + tuple(w.simple_points), seed=seed)
        expected = {p: e, **{s: 1 for s in w.simple_points}}
        got = dict(div.points)
        ok = got == expected and len(w.simple_points) == f.d ** f.n - e
        detail = {"multiplicities": sorted(got.values(), reverse=True),
                  "points": [[pt.to_json(), m] for pt, m in div.points]}
    except (PncritError, AssertionError) as exc:
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    checks.append(Check("fiber", ok, True, detail))
    # (ii) p critical, simple points not
    on_p = raw.evaluate(list(p.coords)) == 0
    off = [raw.evaluate(list(s.coords)) != 0 for s in w.simple_points]
    checks.append(Check("critical_membership", on_p and all(off), True,
                        {"p_on_critical": on_p, "simple_off_critical": all(off)}))
    # the smoothness statements rely on a fold (k = 2); for e > 2 the critical
    # locus is singular at p, so they are reported but not applicable
    fold = e == 2
    grad = _gradient_at(reduced.form, p.coords) if reduced else []
    checks.append(Check("critical_smooth_at_p", any(grad), fold,
                        {"gradient": [str(g) for g in grad]}))
    factor, mult = local_critical_factor(f, p)
    if factor is None:
        checks.append(Check("multiplicity_along", False, fold, {"separated": False}))
    else:
        m = multiplicity_along(f, factor)
        checks.append(Check("multiplicity_along", m == e, fold,
                            {"separated": True, "factor": str(factor), "multiplicity": m}))
    branch = branch_locus(f)
    bgrad = _gradient_at(branch.form, q.coords)
    checks.append(Check("branch_smooth_at_q", branch.contains(q) and any(bgrad), fold,
                        {"branch_degree": branch.degree, "on_branch": branch.contains(q),
                         "gradient_nonzero": any(bgrad)}))
    return VerificationReport(checks)


# ---------------------------------------------------------------------------
# roadmap hypotheses (tail length 1 or 2)

def random_automorphism(n, seed=0, bound=2):
    """A seeded invertible integer linear change of coordinates, as a map."""
    rng = random.Random(seed)
    while True:
        M = [[rng.randint(-bound, bound) for _ in range(n + 1)] for _ in range(n + 1)]
        if rank(M) == n + 1:
            break
    X = Poly.gens(n + 1)
    coords = []
    for row in M:
        acc = Poly.zero(n + 1)
        for c, x in zip(row, X):
            if c:
                acc = acc + x.scale(c)
        coords.append(acc)
    return morphism_new(n, 1, coords)


def _image_chain(f, H, steps):
    chain = [H]
    for _ in range(steps):
        chain.append(image_hypersurface(f, chain[-1]))
    return chain


def verify_roadmap_hypotheses(f, ell, witness=None, alpha=None, seed=0):
    """Testable surrogates of the four roadmap hypotheses for ``f^ell``.

    The reduced critical locus is split into irreducible components; ``C``
    is the component through the witness point when a witness is given,
    otherwise the first component.  With ``alpha`` the map studied is
    ``alpha o f`` (same critical locus, branch locus moved by ``alpha``).
    """
    if ell not in (1, 2):
        raise StructuralError("tail length must be 1 or 2")
    g = compose_maps(alpha, f) if alpha is not None else f
    raw, reduced = critical_locus(g)
    components = [Hypersurface(c, check=False)
                  for c, _ in irreducible_factors(reduced.form)]
    C = components[0]
    if witness is not None:
        through = [H for H in components if H.contains(witness.p)]
        if len(through) != 1:
            raise StructuralError(f"{len(through)} critical components pass through p")
        C = through[0]
    chains = {H: _image_chain(g, H, ell) for H in components}
    chain = chains[C]
    B = chain[-1]

    def ratio_of(H):
        return Fraction(g.d ** (ell * (g.n - 1)) * H.degree, chains[H][-1].degree)

    checks = []
    # (1) exactly one component reaches B
    reaching = [H for H in components if chains[H][-1] == B]
    unique = len(reaching) == 1
    detail = {"components": len(components), "reaching_B": len(reaching)}
    if witness is not None and ell == 1:
        div = fiber_divisor(g, witness.q, seed=seed)
        multiple = [m for _, m in div.points if m >= 2]
        detail["fiber_multiple_points"] = multiple
        unique = unique and multiple == [2]
    checks.append(Check("unique_component", unique, True, detail))
    # (2) intermediate images avoid the critical locus
    inter = chain[1:-1]
    checks.append(Check("images_not_critical",
                        not any(containment(H, reduced) for H in inter), True,
                        {"intermediate_degrees": [H.degree for H in inter]}))
    # (3) generically one-to-one: degree bookkeeping along the chain
    ratio = ratio_of(C)
    checks.append(Check("generically_injective", ratio == 1, True,
                        {"degree_ratio": str(ratio), "chain_degrees": [H.degree for H in chain],
                         "component_ratios": [str(ratio_of(H)) for H in components]}))
    # (4) multiplicity of f^ell along C
    pulled = B.form
    for _ in range(ell):
        pulled = pullback(g, pulled)
    m = divisibility_order(C.form, pulled)
    checks.append(Check("multiplicity_two", m == 2, True, {"multiplicity": m}))
    report = VerificationReport(checks)
    if alpha is not None:
        Bf = branch_locus(f)
        moved = image_hypersurface(alpha, Bf)
        before = Fraction(f.d ** (f.n - 1) * Bf.degree, image_hypersurface(f, Bf).degree)
        after = Fraction(f.d ** (f.n - 1) * moved.degree, image_hypersurface(f, moved).degree)
        report.checks.append(Check("alpha_degree_ratio", after == 1, True,
                                   {"before": str(before), "after": str(after)}))
    return report


# ---------------------------------------------------------------------------
# maps of P^1 and their symmetric powers

@dataclasses.dataclass(frozen=True)
class P1Portrait:
    critical_points: tuple     # ((ProjPoint, k_p, ell_p), ...)

    def to_json(self):
        return [{"point": p.to_json(), "k": k, "ell": l} for p, k, l in self.critical_points]


def p1_map(text, d=None):
    """A map of P^1 from ``"z^2-1"``-style text (``z = s/t``) or from a
    pair of binary forms ``"s^2-t^2, t^2"``."""
    if "," in text:
        a, b = text.split(",")
        F = [parse_poly(a, 2, ["s", "t"]), parse_poly(b, 2, ["s", "t"])]
        deg = F[0].degree()
    else:
        g = parse_poly(text, 1, ["z"])
        deg = d or g.degree()
        num = Poly(2, {(k, deg - k): c for (k,), c in g.terms.items()})
        F = [num, Poly(2, {(0, deg): 1})]
    return morphism_new(1, deg, F)


def _binary_rational_roots(form):
    """Rational roots of a binary form in (s, t) with multiplicities."""
    roots = []
    m = form.degree()
    at_inf = min(e[1] for e in form.terms)          # power of t dividing form
    if at_inf:
        roots.append((ProjPoint([1, 0]), at_inf))
    uni = Poly(1, {(e[0],): c for e, c in form.terms.items()})
    for r in rational_roots(uni):
        lin = Poly(1, {(1,): 1, (0,): -r})
        roots.append((ProjPoint([r, 1]), divisibility_order(lin, uni)))
    if sum(k for _, k in roots) != m:
        raise IrrationalCriticalPoint("critical points are not all rational")
    return roots


def critical_portrait_p1(f1, max_steps=64):
    """Exact preperiod and period of every critical point."""
    if f1.n != 1:
        raise StructuralError("portraits are for maps of P^1")
    raw, _ = critical_locus(f1)
    out = []
    for c, _ in _binary_rational_roots(raw):
        seen = {c: 0}
        x = c
        for step in range(1, max_steps + 1):
            x = f1(x)
            if x in seen:
                ell = seen[x]
                out.append((c, step - ell, ell))
                break
            seen[x] = step
        else:
            raise OrbitBudgetExceeded(f"orbit of {c} did not cycle within {max_steps} steps",
                                      cap="max_steps")
    return P1Portrait(tuple(sorted(out)))


def pcf_type_prediction(portrait):
    """``(lcm k_p, max(1, max ell_p))``."""
    if not portrait.critical_points:
        raise StructuralError("empty portrait")
    k = math.lcm(*(k for _, k, _ in portrait.critical_points))
    ell = max(1, max(l for _, _, l in portrait.critical_points))
    return PcfType(k, ell)


def symmetric_power(f1, n):
    """The induced map on binary degree-n forms ``sum a_i s^(n-i) t^i``."""
    if f1.n != 1:
        raise StructuralError("symmetric powers are of maps of P^1")
    if n < 2:
        raise StructuralError("symmetric power needs n >= 2")
    N = n + 5                      # a_0..a_n, s, t, u, v
    s, t, u, v = n + 1, n + 2, n + 3, n + 4
    A = [Poly.var(N, i) for i in range(n + 1)]
    S, T, U, V = (Poly.var(N, i) for i in (s, t, u, v))
    g = Poly.zero(N)
    for i in range(n + 1):
        g = g + A[i] * S ** (n - i) * T ** i
    f0, f1c = (c.embed(N, [s, t]) for c in f1.coords)
    G = sylvester_resultant(g, V * f0 - U * f1c, s, t)
    coeffs = []
    for i in range(n + 1):
        part = {e[:n + 1] + (0,) * 4: c for e, c in G.terms.items()
                if e[u] == n - i and e[v] == i}
        coeffs.append(Poly(N, part).restrict(list(range(n + 1))))
    if not any(coeffs):
        raise AssertionError("resultant vanished identically")
    common = Poly.zero(n + 1)
    for c in coeffs:
        common = gcd(common, c) if c else common
    if not common.is_constant():
        coeffs = [exact_quotient(c, common) if c else c for c in coeffs]
    degs = {c.degree() for c in coeffs if c}
    if degs != {f1.d}:
        raise AssertionError(f"symmetric power has degree {degs}, expected {f1.d}")
    return morphism_new(n, f1.d, coeffs)


def elementary_symmetric_point(points):
    """Coefficients of ``prod (beta_j s - alpha_j t)`` for points
    ``[alpha_j : beta_j]`` of P^1 (the packaging map to P^n)."""
    n = len(points)
    poly = [Fraction(1)]               # coefficients of s^(m-i) t^i
    for pt in points:
        a, b = (Fraction(x) for x in pt)
        new = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i] += c * b
            new[i + 1] -= c * a
        poly = new
    return ProjPoint(poly) if any(poly) else None
