"""Groebner bases over Q and the ideal operations built on them.

Basis elements are kept as primitive integer polynomials and reduced
fraction-free.  Inside the engine a monomial is represented by its order key
(see :meth:`MonomialOrder.key`), so comparing monomials is plain tuple
comparison and multiplying them is component-wise addition.
"""

import itertools
import math
import os
import threading
from functools import reduce
from operator import add, sub

from . import caps
from .errors import ResourceCapExceeded, StructuralError
from .poly import GREVLEX, MonomialOrder, Poly


class _Ring:
    """Key-space bookkeeping for one (nvars, order) pair."""

    def __init__(self, nvars, order):
        self.nvars = nvars
        self.order = order
        self.exp_slots, self.deg_slots = order.layout(nvars)
        # block degree slot -> [(exp slot, weight)]
        self.deg_parts = []
        blocks = [(0, nvars)] if order.kind == "grevlex" else [(0, order.split), (order.split, nvars)]
        for lo, hi in blocks:
            self.deg_parts.append([(self.exp_slots[i], order._w(i)) for i in range(lo, hi)])

    def to_key(self, exp):
        return self.order.key(exp)

    def exps(self, key):
        return tuple(-key[s] for s in self.exp_slots)

    def from_poly(self, p):
        key = self.order.key
        return {key(e): c for e, c in p.terms.items()}

    def to_poly(self, d):
        exp_slots = self.exp_slots
        return Poly(self.nvars, {tuple(-k[s] for s in exp_slots): c for k, c in d.items()})

    def divides(self, kg, k):
        for s in self.exp_slots:
            if kg[s] < k[s]:
                return False
        return True

    def lcm(self, a, b):
        out = list(map(min, a, b))
        for slot, parts in zip(self.deg_slots, self.deg_parts):
            out[slot] = sum(-out[s] * w for s, w in parts)
        return tuple(out)

    def coprime(self, a, b):
        for s in self.exp_slots:
            if a[s] and b[s]:
                return False
        return True

    def total_degree(self, key):
        return -sum(key[s] for s in self.exp_slots)


def _primitive(d):
    if not d:
        return d
    g = reduce(math.gcd, d.values(), 0)
    if d[max(d)] < 0:
        g = -g
    if g == 1:
        return d
    return {k: c // g for k, c in d.items()}


def _integerize(p):
    """Primitive integer multiple of a rational Poly (sign unchanged)."""
    den = reduce(math.lcm, (getattr(c, "denominator", 1) for c in p.terms.values()), 1)
    ints = {e: int(c * den) for e, c in p.terms.items()}
    g = reduce(math.gcd, ints.values(), 0)
    return Poly(p.nvars, {e: c // g for e, c in ints.items()}) if g else p


class _Element:
    __slots__ = ("poly", "lead", "lc", "sugar")

    def __init__(self, poly, sugar):
        self.poly = poly
        self.lead = max(poly)
        self.lc = poly[self.lead]
        self.sugar = sugar


def _check_poly_caps(ring, d):
    cap = caps.current()
    deg = max(ring.total_degree(k) for k in d)
    if deg > cap.max_degree:
        raise ResourceCapExceeded(f"Groebner element of degree {deg} exceeds cap {cap.max_degree}", cap="max_degree")
    bits = max(abs(c).bit_length() for c in d.values())
    if bits > cap.max_bits:
        raise ResourceCapExceeded(f"Groebner coefficient of {bits} bits exceeds cap {cap.max_bits}", cap="max_bits")


def _reduce(p, basis, ring, full=True):
    """Fraction-free normal form of dict ``p`` by the elements in ``basis``.

    Returns a primitive integer polynomial (a nonzero rational multiple of the
    true normal form) as a dict.
    """
    p = dict(p)
    rem = {}
    steps = 0
    divides = ring.divides
    while p:
        k = max(p)
        c = p[k]
        for g in basis:
            if divides(g.lead, k):
                break
        else:
            if not full:
                rem.update(p)
                break
            rem[k] = c
            del p[k]
            continue
        m = tuple(map(sub, k, g.lead))
        lc = g.lc
        h = math.gcd(c, lc)
        a, b = lc // h, c // h
        if a < 0:
            a, b = -a, -b
        if a != 1:
            for t in p:
                p[t] *= a
            for t in rem:
                rem[t] *= a
        del p[k]
        for gk, gc in g.poly.items():
            if gk == g.lead:
                continue
            t = tuple(map(add, gk, m))
            v = p.get(t, 0) - b * gc
            if v:
                p[t] = v
            else:
                p.pop(t, None)
        steps += 1
        if steps % 32 == 0 and p:
            gg = reduce(math.gcd, itertools.chain(p.values(), rem.values()), 0)
            if gg > 1:
                p = {t: v // gg for t, v in p.items()}
                rem = {t: v // gg for t, v in rem.items()}
    return _primitive(rem)


def _spoly(f, g, ring):
    L = ring.lcm(f.lead, g.lead)
    mf = tuple(map(sub, L, f.lead))
    mg = tuple(map(sub, L, g.lead))
    h = math.gcd(f.lc, g.lc)
    a, b = g.lc // h, f.lc // h
    out = {}
    for k, c in f.poly.items():
        out[tuple(map(add, k, mf))] = a * c
    for k, c in g.poly.items():
        t = tuple(map(add, k, mg))
        v = out.get(t, 0) - b * c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def _sugar_of(ring, d, weights):
    def wdeg(key):
        return sum(w * -key[s] for s, w in zip(ring.exp_slots, weights))
    return max(wdeg(k) for k in d)


def _buchberger(polys, ring, weights=None):
    """Reduced Groebner basis (list of key dicts) with Gebauer-Moeller pair
    elimination and the sugar selection strategy."""
    n = ring.nvars
    weights = weights or (1,) * n

    def wdeg(key):
        return sum(w * -key[s] for s, w in zip(ring.exp_slots, weights))

    elems = []          # every element ever added
    active = []         # indices forming the current basis
    pairs = {}          # (i, j) -> (sugar, lcm)
    cap = caps.current()
    processed = 0

    def update(h_idx):
        h = elems[h_idx]
        lt_h = h.lead
        # Gebauer-Moeller: new pairs (h, g)
        cand = []
        for g_idx in active:
            g = elems[g_idx]
            L = ring.lcm(lt_h, g.lead)
            cand.append((g_idx, L, ring.coprime(lt_h, g.lead)))
        keep = []
        for idx, (g_idx, L, cop) in enumerate(cand):
            if cop:
                keep.append((g_idx, L, cop))
                continue
            redundant = False
            for j, (g2, L2, _) in enumerate(cand):
                if j != idx and ring.divides(L2, L) and (L2 != L or j < idx):
                    redundant = True
                    break
            if not redundant:
                keep.append((g_idx, L, cop))
        new_pairs = {}
        for g_idx, L, cop in keep:
            if cop:
                continue
            g = elems[g_idx]
            s = max(h.sugar + wdeg(tuple(map(sub, L, lt_h))), g.sugar + wdeg(tuple(map(sub, L, g.lead))))
            new_pairs[(g_idx, h_idx)] = (s, L)
        # prune old pairs whose lcm is divisible by lt(h) in the strict sense
        for (i, j), (s, L) in list(pairs.items()):
            if ring.divides(lt_h, L):
                Li = ring.lcm(elems[i].lead, lt_h)
                Lj = ring.lcm(elems[j].lead, lt_h)
                if Li != L and Lj != L:
                    del pairs[(i, j)]
        pairs.update(new_pairs)
        active[:] = [g for g in active if not ring.divides(lt_h, elems[g].lead)]
        active.append(h_idx)

    def add_element(d):
        _check_poly_caps(ring, d)
        elems.append(_Element(d, _sugar_of(ring, d, weights)))
        update(len(elems) - 1)

    initial = []
    for d in polys:
        if d:
            initial.append(_primitive(d))
    initial.sort(key=lambda d: (_sugar_of(ring, d, weights), max(d)))
    for d in initial:
        r = _reduce(d, [elems[i] for i in active], ring)
        if r:
            if len(r) == 1 and ring.total_degree(next(iter(r))) == 0:
                return [{next(iter(r)): 1}]
            add_element(r)

    while pairs:
        key = min(pairs, key=lambda ij: (pairs[ij][0], pairs[ij][1], ij))
        del pairs[key]
        processed += 1
        if processed > cap.max_pairs:
            raise ResourceCapExceeded(f"more than {cap.max_pairs} critical pairs", cap="max_pairs")
        i, j = key
        s = _spoly(elems[i], elems[j], ring)
        if not s:
            continue
        r = _reduce(s, [elems[a] for a in active], ring)
        if not r:
            continue
        if len(r) == 1 and ring.total_degree(next(iter(r))) == 0:
            return [{next(iter(r)): 1}]
        add_element(r)

    return _interreduce([elems[i] for i in active], ring)


def _interreduce(basis, ring):
    # drop elements whose leading monomial is divisible by another's
    basis = sorted(basis, key=lambda e: e.lead)
    minimal = []
    for e in basis:
        if not any(ring.divides(m.lead, e.lead) for m in minimal):
            minimal = [m for m in minimal if not ring.divides(e.lead, m.lead)]
            minimal.append(e)
    out = []
    for idx, e in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = _reduce(e.poly, others, ring)
        out.append(_Element(r, e.sugar))
    out.sort(key=lambda e: e.lead)
    return [e.poly for e in out]


# ---------------------------------------------------------------------------
# public API

class Ideal:
    """An ideal of Q[x_0, ..., x_{nvars-1}] given by generators.

    Groebner bases are cached per monomial order; the first computed basis for
    an order wins and is never replaced.
    """

    def __init__(self, generators, nvars=None):
        gens = list(generators)
        if not gens and nvars is None:
            raise StructuralError("an ideal needs generators or an explicit nvars")
        self.nvars = nvars if nvars is not None else gens[0].nvars
        if any(g.nvars != self.nvars for g in gens):
            raise StructuralError("generators disagree on variable count")
        self.generators = tuple(g for g in gens if g)
        self._cache = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.generators)

    def groebner(self, order=GREVLEX, weights=None):
        with self._lock:
            hit = self._cache.get(order)
        if hit is not None:
            return hit
        basis = groebner(self.generators, order, nvars=self.nvars, weights=weights)
        with self._lock:
            return self._cache.setdefault(order, basis)


# when set, every computed basis is re-checked with the Buchberger criterion
SELF_CHECK = bool(os.environ.get("PNCRIT_CHECK_GB"))


def _as_ideal(I, nvars=None):
    if isinstance(I, Ideal):
        return I
    return Ideal(I, nvars)


def groebner(generators, order=GREVLEX, nvars=None, weights=None):
    """Reduced Groebner basis (normalized Polys, ascending leading monomials).

    ``weights`` only steers the sugar pair-selection heuristic; pass the
    weights making the input quasi-homogeneous when there are any.
    """
    gens = [g for g in generators if g]
    if nvars is None:
        if not gens:
            raise StructuralError("cannot infer the ring of an empty generator list")
        nvars = gens[0].nvars
    if any(g.nvars != nvars for g in gens):
        raise StructuralError("generators disagree on variable count")
    if not gens:
        return []
    ring = _Ring(nvars, order)
    dicts = [ring.from_poly(_integerize(g)) for g in gens]
    basis = _buchberger(dicts, ring, weights)
    out = [ring.to_poly(_primitive(d)) for d in basis]
    if SELF_CHECK and not is_groebner(out, order):
        raise AssertionError("Buchberger criterion fails on a computed basis")
    return out


def normal_form(p, basis, order=GREVLEX):
    """Normal form of ``p`` modulo a Groebner basis, up to a nonzero scalar."""
    if not p:
        return p
    ring = _Ring(p.nvars, order)
    elems = [_Element(ring.from_poly(_integerize(g)), 0) for g in basis]
    r = _reduce(ring.from_poly(_integerize(p)), elems, ring)
    return ring.to_poly(r)


def s_polynomial(f, g, order=GREVLEX):
    ring = _Ring(f.nvars, order)
    a = _Element(ring.from_poly(_integerize(f)), 0)
    b = _Element(ring.from_poly(_integerize(g)), 0)
    return ring.to_poly(_spoly(a, b, ring))


def is_groebner(basis, order=GREVLEX):
    """Buchberger criterion: every S-polynomial reduces to zero."""
    for f, g in itertools.combinations(basis, 2):
        if normal_form(s_polynomial(f, g, order), basis, order):
            return False
    return True


def ideal_membership(p, I, order=GREVLEX):
    I = _as_ideal(I, p.nvars)
    if p.nvars != I.nvars:
        raise StructuralError("variable count mismatch")
    if not p:
        return True
    basis = I.groebner(order)
    return not normal_form(p, basis, order)


def is_unit_ideal(I):
    I = _as_ideal(I)
    basis = I.groebner()
    return len(basis) == 1 and basis[0].is_constant()


def _extend(p, extra_front=1):
    """Embed p into a ring with ``extra_front`` new variables at the front."""
    return p.embed(p.nvars + extra_front, [i + extra_front for i in range(p.nvars)])


def radical_membership(p, I):
    """p in rad(I), via 1 in I + (1 - y p) with a fresh variable y."""
    I = _as_ideal(I, p.nvars)
    if p.nvars != I.nvars:
        raise StructuralError("variable count mismatch")
    if not p:
        return True
    n = I.nvars
    y = Poly.var(n + 1, 0)
    gens = [_extend(g) for g in I.generators] + [Poly.one(n + 1) - y * _extend(p)]
    basis = groebner(gens, GREVLEX)
    return len(basis) == 1 and basis[0].is_constant()


def elimination_ideal(I, drop, weights=None):
    """Generators of I intersected with the subring of the kept variables.

    The returned polynomials live in a ring whose variables are the kept ones,
    in their original relative order.
    """
    I = _as_ideal(I)
    n = I.nvars
    drop = sorted(set(drop))
    if any(not 0 <= i < n for i in drop):
        raise StructuralError("variable index out of range")
    if len(drop) >= n:
        raise StructuralError("must keep at least one variable")
    keep = [i for i in range(n) if i not in drop]
    if not drop:
        return list(I.generators) if not I.generators else groebner(I.generators)
    perm = drop + keep                       # new position -> old index
    pos = {old: new for new, old in enumerate(perm)}
    moved = [g.embed(n, [pos[i] for i in range(n)]) for g in I.generators]
    w = None
    if weights is not None:
        w = tuple(weights[old] for old in perm)
    order = MonomialOrder("block", split=len(drop))
    basis = groebner(moved, order, weights=w)
    k = len(drop)
    out = []
    for g in basis:
        if not any(e[i] for e in g.terms for i in range(k)):
            out.append(g.restrict(list(range(k, n))))
    return out


def saturation(I, p, method="auto"):
    """Generators of (I : p^infinity).

    The default route adds ``1 - y p`` with a fresh variable and eliminates
    ``y``.  For homogeneous ``I`` and ``p`` a single variable, ``method="auto"``
    uses the graded shortcut: a grevlex basis with that variable last, divided
    by the largest power of the variable.
    """
    I = _as_ideal(I, p.nvars)
    if not p:
        raise StructuralError("saturation by the zero polynomial")
    n = I.nvars
    if p.is_constant():
        return groebner(I.generators, nvars=n) if I.generators else []
    if not I.generators:
        return []
    single_var = len(p.terms) == 1 and sum(next(iter(p.terms))) == 1
    if method == "auto" and single_var and I.is_homogeneous():
        v = p.variables()[0]
        perm = [i for i in range(n) if i != v] + [v]
        pos = {old: new for new, old in enumerate(perm)}
        moved = [g.embed(n, [pos[i] for i in range(n)]) for g in I.generators]
        basis = groebner(moved, GREVLEX)
        out = []
        for g in basis:
            m = min(e[n - 1] for e in g.terms)
            if m:
                g = Poly(n, {e[:-1] + (e[-1] - m,): c for e, c in g.terms.items()})
            out.append(g.embed(n, perm))
        return groebner(out, GREVLEX)
    y = Poly.var(n + 1, 0)
    gens = [_extend(g) for g in I.generators] + [Poly.one(n + 1) - y * _extend(p)]
    elim = elimination_ideal(Ideal(gens), [0])
    return groebner(elim, nvars=n) if elim else []


def intersect(I, J):
    """I intersected with J via t*I + (1-t)*J, eliminating t."""
    I, J = _as_ideal(I), _as_ideal(J)
    n = I.nvars
    t = Poly.var(n + 1, 0)
    gens = [t * _extend(g) for g in I.generators] + \
           [(Poly.one(n + 1) - t) * _extend(g) for g in J.generators]
    elim = elimination_ideal(Ideal(gens), [0])
    return groebner(elim, nvars=n) if elim else []


def saturate_irrelevant(I):
    """(I : (x_0, ..., x_n)^infinity) for a homogeneous ideal, computed as the
    intersection of the saturations by each variable."""
    I = _as_ideal(I)
    n = I.nvars
    parts = [saturation(I, Poly.var(n, i)) for i in range(n)]
    acc = parts[0]
    for part in parts[1:]:
        acc = intersect(acc, part)
    return acc


def projective_is_empty(I, method="groebner"):
    """Whether the homogeneous ideal I has no zeros in projective space.

    ``method="radical"`` tests x_i in rad(I) for every i (one Rabinowitsch
    basis per variable); ``method="groebner"`` reads the same fact off a
    single grevlex basis: every variable must have a pure power among the
    leading monomials.
    """
    I = _as_ideal(I)
    if not I.is_homogeneous():
        raise StructuralError("projective emptiness needs homogeneous generators")
    n = I.nvars
    if method == "radical":
        return all(radical_membership(Poly.var(n, i), I) for i in range(n))
    basis = I.groebner(GREVLEX)
    pure = set()
    for g in basis:
        e, _ = g.leading_term(GREVLEX)
        nz = [i for i, k in enumerate(e) if k]
        if not nz:
            return True
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == n


def leading_monomials(basis, order=GREVLEX):
    return [g.leading_term(order)[0] for g in basis]


def dimension(I):
    """Krull dimension of the affine variety V(I); -1 for the unit ideal."""
    I = _as_ideal(I)
    n = I.nvars
    if not I.generators:
        return n
    basis = I.groebner(GREVLEX)
    leads = leading_monomials(basis)
    if any(not any(e) for e in leads):
        return -1
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in leads]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return 0
