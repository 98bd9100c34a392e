"""Multivariate gcd, squarefree parts and divisibility orders.

The gcd is a recursive primitive-PRS over ``Z`` (or ``GF(P)`` for the modular
cross-checks).  The main variable is the one of lowest maximum degree.  A
modular image (random prime, random evaluation of the other variables) bounds
the degree of the gcd in the main variable; when that bound is zero the PRS is
skipped entirely, which is the common case for squarefree-ness tests.
"""

import math
import random
from fractions import Fraction
from functools import reduce
from operator import add, sub

from .errors import StructuralError
from .poly import GREVLEX, Poly, divmod_poly

_rng = random.Random(0x5EED)

PRIMES_30 = (1073741789, 1073741783, 1073741741, 1073741723, 1073741719,
             1073741717, 1073741689, 1073741671, 1073741663, 1073741651)


# ---------------------------------------------------------------------------
# dict-level helpers; ``mod`` is None for Z or a prime for GF(mod)

def _red(c, mod):
    return c % mod if mod else c


def _clean(d, mod):
    if mod:
        return {e: c % mod for e, c in d.items() if c % mod}
    return {e: c for e, c in d.items() if c}


def _mul(a, b, mod):
    out = {}
    get = out.get
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(map(add, e1, e2))
            out[e] = get(e, 0) + c1 * c2
    return _clean(out, mod)


def _sub(a, b, mod):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) - c
    return _clean(out, mod)


def _scale(a, c, mod):
    return _clean({e: v * c for e, v in a.items()}, mod)


def _lead(a):
    e = max(a, key=GREVLEX.key)
    return e, a[e]


def _exact_div(a, b, mod):
    """a / b, assuming exact divisibility (over Z the quotient is integral)."""
    if not a:
        return {}
    be, bc = _lead(b)
    inv = pow(bc, -1, mod) if mod else None
    rest = dict(a)
    quot = {}
    key = GREVLEX.key
    while rest:
        e = max(rest, key=key)
        c = rest[e]
        if any(x < y for x, y in zip(e, be)):
            raise ArithmeticError("inexact division")
        if mod:
            f = c * inv % mod
        else:
            f, r = divmod(c, bc)
            if r:
                raise ArithmeticError("inexact division")
        m = tuple(map(sub, e, be))
        quot[m] = f
        for ge, gc in b.items():
            t = tuple(map(add, ge, m))
            v = rest.get(t, 0) - f * gc
            if mod:
                v %= mod
            if v:
                rest[t] = v
            else:
                rest.pop(t, None)
    return quot


def _int_content(a):
    return reduce(math.gcd, a.values(), 0)


def _normalize(a, mod):
    """Primitive with positive leading coefficient (Z) or monic (GF)."""
    if not a:
        return a
    _, lc = _lead(a)
    if mod:
        inv = pow(lc, -1, mod)
        return {e: c * inv % mod for e, c in a.items()}
    g = _int_content(a)
    if lc < 0:
        g = -g
    if g == 1:
        return a
    return {e: c // g for e, c in a.items()}


def _vars(a):
    used = set()
    for e in a:
        used.update(i for i, k in enumerate(e) if k)
    return used


def _split(a, v):
    """Coefficients of ``a`` as a polynomial in variable ``v``."""
    out = {}
    for e, c in a.items():
        k = e[v]
        e2 = e[:v] + (0,) + e[v + 1:]
        out.setdefault(k, {})[e2] = c
    return out


def _join(coeffs, v):
    out = {}
    for k, d in coeffs.items():
        for e, c in d.items():
            out[e[:v] + (k,) + e[v + 1:]] = c
    return out


def _content_v(a, v, mod):
    parts = _split(a, v)
    g = {}
    for d in sorted(parts.values(), key=len):
        g = _gcd(g, d, mod) if g else _normalize(d, mod)
        if _is_unit(g):
            break
    return g


def _is_unit(a):
    return len(a) == 1 and not any(next(iter(a)))


def _prem(a, b, v, mod):
    """Pseudo-remainder of a by b with respect to variable v."""
    ca, cb = _split(a, v), _split(b, v)
    da, db = max(ca), max(cb)
    lcb = cb[db]
    r = dict(ca)
    for k in range(da, db - 1, -1):
        # multiply the running remainder by lc(b) and subtract
        lead = r.pop(k, None)
        r = {j: _mul(c, lcb, mod) for j, c in r.items()}
        if lead:
            for j, c in cb.items():
                if j == db:
                    continue
                t = j + k - db
                r[t] = _sub(r.get(t, {}), _mul(lead, c, mod), mod)
        r = {j: c for j, c in r.items() if c}
    return _join(r, v)


def _univariate_image(a, v, point, mod):
    """Evaluate all variables but v at ``point`` mod ``mod``: dense list."""
    deg = max(e[v] for e in a)
    out = [0] * (deg + 1)
    for e, c in a.items():
        t = c
        for i, k in enumerate(e):
            if i != v and k:
                t = t * pow(point[i], k, mod)
        out[e[v]] = (out[e[v]] + t) % mod
    return out


def _uni_gcd_degree(f, g, mod):
    def trim(h):
        while h and h[-1] == 0:
            h.pop()
        return h

    f, g = trim(list(f)), trim(list(g))
    while g:
        inv = pow(g[-1], -1, mod)
        while len(f) >= len(g):
            c = f[-1] * inv % mod
            shift = len(f) - len(g)
            for i, gc in enumerate(g):
                f[i + shift] = (f[i + shift] - c * gc) % mod
            trim(f)
            if not f:
                break
        f, g = g, f
    return len(f) - 1


def _modular_degree_bound(a, b, v, nvars):
    """Upper bound on deg_v gcd(a, b) from one modular univariate image."""
    if any(isinstance(c, Fraction) for c in a.values()):
        return None
    mod = _rng.choice(PRIMES_30)
    da, db = max(e[v] for e in a), max(e[v] for e in b)
    for _ in range(4):
        point = [_rng.randrange(1, mod) for _ in range(nvars)]
        fa = _univariate_image(a, v, point, mod)
        fb = _univariate_image(b, v, point, mod)
        if len(fa) - 1 == da and fa[-1] and fb[-1] and len(fb) - 1 == db:
            return _uni_gcd_degree(fa, fb, mod)
    return None


def _gcd(a, b, mod):
    if not a:
        return _normalize(b, mod)
    if not b:
        return _normalize(a, mod)
    va, vb = _vars(a), _vars(b)
    if not va or not vb:
        if mod:
            return {next(iter(a)): 1} if not va else {next(iter(b)): 1}
        g = math.gcd(_int_content(a), _int_content(b))
        n = len(next(iter(a)))
        return {(0,) * n: g}
    only_a = va - vb
    if only_a:
        return _gcd(_content_v(a, min(only_a), mod), b, mod)
    only_b = vb - va
    if only_b:
        return _gcd(a, _content_v(b, min(only_b), mod), mod)
    v = min(va, key=lambda i: (max(max(e[i] for e in a), max(e[i] for e in b)), i))
    ca, cb = _content_v(a, v, mod), _content_v(b, v, mod)
    pa, pb = _exact_div(a, ca, mod), _exact_div(b, cb, mod)
    cg = _gcd(ca, cb, mod)
    if mod is None:
        bound = _modular_degree_bound(pa, pb, v, len(next(iter(a))))
        if bound == 0:
            return cg
    if max(e[v] for e in pa) < max(e[v] for e in pb):
        pa, pb = pb, pa
    while pb and any(e[v] for e in pb):
        r = _prem(pa, pb, v, mod)
        if r:
            r = _exact_div(r, _content_v(r, v, mod), mod)
        pa, pb = pb, r
    if pb:  # nonzero remainder free of v: the primitive parts are coprime
        return cg
    g = _normalize(_exact_div(pa, _content_v(pa, v, mod), mod), mod)
    return _normalize(_mul(cg, g, mod), mod)


# ---------------------------------------------------------------------------
# Poly-level API

def _to_int_dict(p):
    """Primitive integer dict of p (scalar factor discarded)."""
    prim = p.normalize()
    return {e: int(c) for e, c in prim.terms.items()}


def _from_dict(d, nvars):
    return Poly(nvars, d)


def gcd(p, q):
    """Normalized greatest common divisor; ``gcd(p, 0) = normalize(p)``."""
    if p.nvars != q.nvars:
        raise StructuralError("variable count mismatch")
    if not p and not q:
        return Poly.zero(p.nvars)
    if not p:
        return q.normalize()
    if not q:
        return p.normalize()
    g = _gcd(_to_int_dict(p), _to_int_dict(q), None)
    return Poly(p.nvars, g).normalize()


def lcm(p, q):
    if not p or not q:
        return Poly.zero(p.nvars)
    g = gcd(p, q)
    return (exact_quotient(p.normalize(), g) * q.normalize()).normalize()


def exact_quotient(p, q):
    quot, rem = divmod_poly(p, q)
    if rem:
        raise ArithmeticError("division is not exact")
    return quot


def squarefree_part(p):
    """Product of the distinct irreducible factors of ``p``, normalized."""
    if not p:
        raise StructuralError("squarefree part of the zero polynomial")
    if p.is_constant():
        return Poly.one(p.nvars)
    g = p.normalize()
    for i in p.variables():
        d = p.derivative(i)
        if d:
            g = gcd(g, d)
            if g.is_constant():
                break
    return exact_quotient(p.normalize(), g).normalize()


def is_squarefree(p):
    return squarefree_part(p) == p.normalize()


def divisibility_order(p, q):
    """Largest k with p^k | q."""
    if p.is_constant():
        raise StructuralError("divisibility order of a constant")
    if not q:
        raise StructuralError("divisibility order in the zero polynomial")
    k = 0
    cur = q
    dp = p.degree()
    while cur.degree() >= dp:
        quot, rem = divmod_poly(cur, p)
        if rem:
            break
        k += 1
        cur = quot
    return k


def squarefree_decomposition(p):
    """Yun-style split ``p = c * prod(a_k^k)``; returns ``{k: a_k}``
    (normalized, nonconstant entries only)."""
    p = p.normalize()
    out = {}
    k = 1
    rest = p
    while not rest.is_constant():
        s = squarefree_part(rest)
        # factors of multiplicity exactly k: s / gcd(s, rest / s)
        rest = exact_quotient(rest, s)
        g = gcd(s, rest) if not rest.is_constant() else Poly.one(p.nvars)
        exact = exact_quotient(s, g).normalize()
        if not exact.is_constant():
            out[k] = exact
        k += 1
    return out


# ---------------------------------------------------------------------------
# modular images, used as cross-check oracles

def to_mod(p, mod):
    """Reduce ``p`` modulo a prime; denominators must be units mod ``mod``."""
    out = {}
    for e, c in p.terms.items():
        c = Fraction(c)
        if c.denominator % mod == 0:
            raise ZeroDivisionError("denominator vanishes modulo the prime")
        v = c.numerator * pow(c.denominator, -1, mod) % mod
        if v:
            out[e] = v
    return out


def gcd_mod(p, q, mod):
    """Monic gcd of the images of p and q in GF(mod)[x] (as a dict)."""
    return _gcd(to_mod(p, mod), to_mod(q, mod), mod)


def divides_mod(a, b, mod):
    """Whether dict ``a`` divides dict ``b`` over GF(mod)."""
    if not b:
        return True
    try:
        _exact_div(b, a, mod)
    except ArithmeticError:
        return False
    return True


def dict_degree(d):
    return max((sum(e) for e in d), default=-1)


def mul_mod(a, b, mod):
    return _mul(a, b, mod)


def pow_mod(a, k, mod):
    n = len(next(iter(a)))
    out = {(0,) * n: 1}
    for _ in range(k):
        out = _mul(out, a, mod)
    return out
