"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` is an immutable map from exponent tuples to nonzero
coefficients.  Coefficients are kept as ``int`` whenever they are integral
and as :class:`fractions.Fraction` otherwise, so integer polynomials (the
common case once normalized) never pay for rational arithmetic.
"""

import math
import os
import re
from fractions import Fraction
from functools import reduce
from operator import add

from . import caps
from .errors import ParseError, StructuralError

DEBUG = bool(os.environ.get("PNCRIT_DEBUG"))


def _num(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, str):
        return _num(Fraction(c))
    raise TypeError(f"unsupported coefficient {c!r}")


class MonomialOrder:
    """Graded reverse lexicographic order, optionally split into blocks.

    ``key(exponents)`` returns a tuple whose natural tuple ordering is the
    monomial order.  The key is a linear function of the exponents, which the
    Groebner engine exploits to multiply monomials directly in key space.

    With ``split=k`` the first ``k`` variables form an elimination block: any
    monomial involving them is larger than every monomial in the remaining
    variables.  ``weights`` gives per-variable degree weights (default 1).
    """

    def __init__(self, kind="grevlex", split=None, weights=None):
        if kind not in ("grevlex", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        if kind == "block" and (split is None or split < 1):
            raise ValueError("block order needs a positive split index")
        self.kind = kind
        self.split = split if kind == "block" else None
        self.weights = tuple(weights) if weights is not None else None

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', split={self.split})"
        return "MonomialOrder('grevlex')"

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.split == other.split and self.weights == other.weights)

    def __hash__(self):
        return hash((self.kind, self.split, self.weights))

    def _w(self, i):
        return 1 if self.weights is None else self.weights[i]

    def _block_key(self, exp, lo, hi):
        deg = sum(self._w(i) * exp[i] for i in range(lo, hi))
        return (deg,) + tuple(-exp[i] for i in range(hi - 1, lo - 1, -1))

    def key(self, exp):
        if self.kind == "grevlex":
            return self._block_key(exp, 0, len(exp))
        return self._block_key(exp, 0, self.split) + self._block_key(exp, self.split, len(exp))

    def layout(self, nvars):
        """Return ``(exp_slots, deg_slots)``: for each variable the key slot
        holding its negated exponent, and the key slots holding block degrees."""
        blocks = [(0, nvars)] if self.kind == "grevlex" else [(0, self.split), (self.split, nvars)]
        exp_slots = [0] * nvars
        deg_slots = []
        pos = 0
        for lo, hi in blocks:
            deg_slots.append(pos)
            pos += 1
            for i in range(hi - 1, lo - 1, -1):
                exp_slots[i] = pos
                pos += 1
        return exp_slots, deg_slots

    def unkey(self, key, nvars):
        exp_slots, _ = self.layout(nvars)
        return tuple(-key[s] for s in exp_slots)


GREVLEX = MonomialOrder("grevlex")


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables over Q."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None, _trusted=False):
        if nvars < 1:
            raise StructuralError("a polynomial needs at least one variable")
        self.nvars = nvars
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise StructuralError(f"monomial {exp} does not have {nvars} slots")
            if any(e < 0 for e in exp):
                raise StructuralError(f"negative exponent in {exp}")
            c = _num(c)
            if c:
                clean[exp] = _num(clean.get(exp, 0) + c)
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, nvars, c):
        c = _num(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _trusted=True)

    @classmethod
    def one(cls, nvars):
        return cls.constant(nvars, 1)

    @classmethod
    def var(cls, nvars, i):
        if not 0 <= i < nvars:
            raise StructuralError(f"variable index {i} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1}, _trusted=True)

    @classmethod
    def gens(cls, nvars):
        return [cls.var(nvars, i) for i in range(nvars)]

    @classmethod
    def monomial(cls, exp, c=1):
        return cls(len(exp), {tuple(exp): c})

    # -- basic queries ----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, 0)

    def __len__(self):
        return len(self.terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i):
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def variables(self):
        """Indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return sorted(used)

    def sorted_terms(self, order=GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order=GREVLEX):
        if not self.terms:
            raise StructuralError("zero polynomial has no leading term")
        exp = max(self.terms, key=order.key)
        return exp, self.terms[exp]

    def leading_coefficient(self, order=GREVLEX):
        return self.leading_term(order)[1]

    # -- equality / hashing -----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise StructuralError(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for exp, c in small.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = _num(v)
            else:
                out.pop(exp, None)
        return Poly(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c):
        c = _num(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: _num(v * c) for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        res = Poly(self.nvars, {e: _num(c) for e, c in out.items() if c}, _trusted=True)
        if DEBUG and self.is_homogeneous() and other.is_homogeneous() and res:
            assert res.is_homogeneous()
            assert res.degree() == self.degree() + other.degree()
        return res

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise StructuralError("only non-negative integer powers are supported")
        if self.terms and k:
            caps.check_degree(self.degree() * k)
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(Fraction(1) / c)
        if isinstance(c, Poly):
            return exact_div(self, c)
        return NotImplemented

    def mul_monomial(self, exp, c=1):
        return Poly(self.nvars, {tuple(map(add, e, exp)): _num(v * c)
                                 for e, v in self.terms.items()}, _trusted=True)

    # -- calculus / evaluation --------------------------------------------
    def derivative(self, i):
        if not 0 <= i < self.nvars:
            raise StructuralError(f"variable index {i} out of range")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = list(e)
                e2[i] = k - 1
                out[tuple(e2)] = _num(c * k)
        return Poly(self.nvars, out, _trusted=True)

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise StructuralError(f"point has {len(point)} coordinates, expected {self.nvars}")
        point = [_num(p) for p in point]
        total = 0
        for e, c in self.terms.items():
            v = c
            for p, k in zip(point, e):
                if k:
                    v *= p ** k
            total += v
        return _num(Fraction(total))

    def __call__(self, *point):
        return self.evaluate(point)

    def gradient(self):
        return [self.derivative(i) for i in range(self.nvars)]

    # -- ring changes -----------------------------------------------------
    def embed(self, nvars, positions):
        """Re-index into a ring with ``nvars`` variables; variable ``i`` goes
        to ``positions[i]``."""
        if len(positions) != self.nvars:
            raise StructuralError("embedding needs one position per variable")
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for i, k in enumerate(e):
                e2[positions[i]] += k
            out[tuple(e2)] = c
        return Poly(nvars, out, _trusted=True)

    def restrict(self, keep):
        """Drop to the variables listed in ``keep`` (others must not occur)."""
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in range(self.nvars) if i not in keep):
                raise StructuralError("polynomial involves a dropped variable")
            out[tuple(e[i] for i in keep)] = c
        return Poly(len(keep), out, _trusted=True)

    # -- normalization ----------------------------------------------------
    def content(self):
        """Positive rational c with self / c primitive integral."""
        if not self.terms:
            return Fraction(0)
        nums, dens = [], []
        for c in self.terms.values():
            c = Fraction(c)
            nums.append(c.numerator)
            dens.append(c.denominator)
        return Fraction(reduce(math.gcd, nums, 0), reduce(math.lcm, dens, 1))

    def normalize(self):
        """Primitive integer coefficients, positive grevlex leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        if c == 1:
            return self
        out = {e: _num(v / c) for e, v in self.terms.items()}
        return Poly(self.nvars, out, _trusted=True)

    def monic(self, order=GREVLEX):
        return self.scale(Fraction(1) / Fraction(self.leading_coefficient(order)))

    def max_bits(self):
        bits = 0
        for c in self.terms.values():
            if isinstance(c, Fraction):
                bits = max(bits, c.numerator.bit_length(), c.denominator.bit_length())
            else:
                bits = max(bits, c.bit_length())
        return bits

    # -- text -------------------------------------------------------------
    def format(self, names=None):
        return format_poly(self, names)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self.nvars}, {format_poly(self)!r})"


# ---------------------------------------------------------------------------
# division

def divide(p, divisors, order=GREVLEX):
    """Multivariate division of ``p`` by ``divisors``.

    Returns ``(quotients, remainder)`` with ``p = sum(q_i * g_i) + r`` and no
    term of ``r`` divisible by a leading monomial of the divisors.
    """
    n = p.nvars
    leads = []
    for g in divisors:
        if g.nvars != n:
            raise StructuralError("variable count mismatch in division")
        if not g.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        e, c = g.leading_term(order)
        leads.append((e, Fraction(c)))
    rest = dict(p.terms)
    quots = [{} for _ in divisors]
    rem = {}
    key = order.key
    while rest:
        e = max(rest, key=key)
        c = rest[e]
        for idx, (le, lc) in enumerate(leads):
            if all(a >= b for a, b in zip(e, le)):
                m = tuple(a - b for a, b in zip(e, le))
                f = _num(c / lc)
                quots[idx][m] = _num(quots[idx].get(m, 0) + f)
                for ge, gc in divisors[idx].terms.items():
                    t = tuple(map(add, ge, m))
                    v = rest.get(t, 0) - f * gc
                    if v:
                        rest[t] = _num(v)
                    else:
                        rest.pop(t, None)
                break
        else:
            rem[e] = c
            del rest[e]
    return [Poly(n, q) for q in quots], Poly(n, rem, _trusted=True)


def divmod_poly(p, q, order=GREVLEX):
    (quot,), rem = divide(p, [q], order)
    return quot, rem


def exact_div(p, q):
    """``p / q``, raising :class:`ArithmeticError` if the division is not exact."""
    quot, rem = divmod_poly(p, q)
    if rem:
        raise ArithmeticError("polynomial division is not exact")
    return quot


def divides(q, p):
    """True iff ``q`` divides ``p`` exactly."""
    if not p:
        return True
    if not q:
        return False
    if p.degree() < q.degree():
        return False
    return not divmod_poly(p, q)[1]


# ---------------------------------------------------------------------------
# parsing / formatting

def default_names(nvars):
    return [f"x{i}" for i in range(nvars)]


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_poly(text, nvars=None, names=None):
    """Parse polynomial text.

    Terms are joined by ``+``/``-``; a term is an optional rational
    coefficient followed by ``*``-joined factors ``name`` or ``name^E``.
    Parenthesized sub-expressions are also accepted.  ``names`` lists the
    variable names in order; by default they are ``x0 .. x{nvars-1}``, and
    when ``nvars`` is omitted it is inferred from the largest ``xK`` used.
    """
    tokens = _tokenize(text)
    if names is None:
        if nvars is None:
            used = [int(v[1:]) for kind, v, _ in tokens
                    if kind == "name" and re.fullmatch(r"x\d+", v)]
            nvars = max(used) + 1 if used else 1
        names = default_names(nvars)
    names = list(names)
    nvars = len(names)
    index = {name: i for i, name in enumerate(names)}
    pos = 0

    def peek():
        return tokens[pos]

    def take(kind=None, value=None):
        nonlocal pos
        tok = tokens[pos]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek()[0] == "op" and peek()[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
        total = term().scale(sign)
        while peek()[0] == "op" and peek()[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
            total = total + term().scale(sign)
        return total

    def term():
        value = factor()
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            value = value * factor()
        return value

    def factor():
        kind, val, at = peek()
        if kind == "num":
            take()
            base = Poly.constant(nvars, Fraction(val))
        elif kind == "name":
            take()
            if val not in index:
                raise ParseError(f"unknown variable {val!r}", at)
            base = Poly.var(nvars, index[val])
        elif kind == "op" and val == "(":
            take()
            base = expr()
            take("op", ")")
        elif kind == "op" and val == "-":
            take()
            return -factor()
        else:
            raise ParseError(f"unexpected token {val or 'end of input'!r}", at)
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            exp_tok = take("num")
            if "/" in exp_tok[1]:
                raise ParseError("exponent must be a non-negative integer", exp_tok[2])
            base = base ** int(exp_tok[1])
        return base

    result = expr()
    if peek()[0] != "end":
        raise ParseError(f"unexpected token {peek()[1]!r}", peek()[2])
    return result


def _format_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p, names=None):
    if names is None:
        names = default_names(p.nvars)
    if not p.terms:
        return "0"
    parts = []
    for exp, c in p.sorted_terms():
        factors = []
        for name, k in zip(names, exp):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mag = abs(Fraction(c))
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        neg = c < 0
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# composition

def compose(p, F):
    """Substitute ``F[i]`` for variable ``i`` of ``p``.

    Evaluated by recursive Horner in the substituted variables, so the only
    products formed are (partial result) x (one of the ``F[i]``).
    """
    if len(F) != p.nvars:
        raise StructuralError(f"need {p.nvars} substitutions, got {len(F)}")
    if not F:
        raise StructuralError("empty substitution")
    k = F[0].nvars
    if any(f.nvars != k for f in F):
        raise StructuralError("substituted polynomials disagree on variable count")
    if p.terms and all(f.terms for f in F):
        caps.check_degree(p.degree() * max(f.degree() for f in F), "composition")
    return _horner(dict(p.terms), p.nvars - 1, F, k)


def _horner(terms, last, F, k):
    """``terms`` only involve variables ``0..last``; returns their value."""
    if not terms:
        return Poly.zero(k)
    if last < 0:
        return Poly.constant(k, next(iter(terms.values())))
    slices = {}
    for e, c in terms.items():
        slices.setdefault(e[last], {})[e[:last] + (0,) * (len(e) - last)] = c
    top = max(slices)
    acc = _horner(slices[top], last - 1, F, k)
    for j in range(top - 1, -1, -1):
        acc = acc * F[last]
        if j in slices:
            acc = acc + _horner(slices[j], last - 1, F, k)
    return acc


def homogeneous_monomials(nvars, degree):
    """All exponent tuples of total degree ``degree`` (grevlex-descending)."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix) + (left,))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    if degree < 0:
        return []
    rec([], degree, nvars)
    out.sort(key=GREVLEX.key, reverse=True)
    return out
