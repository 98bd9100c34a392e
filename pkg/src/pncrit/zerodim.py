"""Points of zero-dimensional ideals, with multiplicities.

The quotient algebra ``A = Q[x]/J`` is finite-dimensional; multiplication by a
generic linear form ``u`` has characteristic polynomial ``prod (l - u(P))^m_P``
where ``m_P`` is the local length of ``J`` at ``P``.  The number of distinct
geometric points is the rank of the trace form ``(a, b) -> tr(M_ab)``, so a
form ``u`` separates the points exactly when the squarefree part of the
characteristic polynomial has that degree.  Coordinates of a rational point
are traces of the multiplication operators restricted to its generalized
eigenspace.
"""

import dataclasses
from fractions import Fraction

import sympy

from . import caps
from .errors import GenericityExhausted, StructuralError
from .gcd import divisibility_order, squarefree_part
from .ideals import groebner
from .linalg import identity, matmul, mat_pow, mat_sub_scalar, nullspace, rank, rref, trace
from .poly import GREVLEX, Poly, divide
from .resultants import bareiss_det


@dataclasses.dataclass(frozen=True)
class ZeroDimPoints:
    """Rational points (affine coordinates) with local lengths.

    ``length`` is dim_Q of the quotient (points counted with multiplicity);
    ``distinct`` counts geometric points, rational or not.
    """
    points: tuple
    length: int
    distinct: int
    char_poly: Poly

    @property
    def rational_length(self):
        return sum(m for _, m in self.points)


def standard_monomials(basis, nvars):
    """Monomials outside the leading-term ideal, or None if there are
    infinitely many (positive-dimensional ideal)."""
    leads = [g.leading_term(GREVLEX)[0] for g in basis]
    if any(not any(e) for e in leads):
        return []
    pure = {next(i for i, k in enumerate(e) if k) for e in leads if sum(1 for k in e if k) == 1}
    if len(pure) < nvars:
        return None

    def reducible(m):
        return any(all(a >= b for a, b in zip(m, e)) for e in leads)

    out = []
    seen = {(0,) * nvars}
    frontier = [(0,) * nvars]
    while frontier:
        nxt = []
        for m in frontier:
            if reducible(m):
                continue
            out.append(m)
            for i in range(nvars):
                m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        frontier = nxt
    out.sort(key=GREVLEX.key)
    return out


class QuotientAlgebra:
    """``Q[x]/J`` for a zero-dimensional ``J`` given by a grevlex basis."""

    def __init__(self, basis, nvars):
        self.basis = list(basis)
        self.nvars = nvars
        mons = standard_monomials(self.basis, nvars)
        if mons is None:
            raise StructuralError("ideal is not zero-dimensional")
        self.monomials = mons
        self.index = {m: i for i, m in enumerate(mons)}
        self._var_mats = None

    @property
    def dim(self):
        return len(self.monomials)

    def coords(self, p):
        _, r = divide(p, self.basis, GREVLEX)
        v = [Fraction(0)] * self.dim
        for e, c in r.terms.items():
            v[self.index[e]] = Fraction(c)
        return v

    def mult_matrix(self, p):
        """Matrix of multiplication by ``p``; column j is ``p * b_j``."""
        cols = [self.coords(p.mul_monomial(m)) for m in self.monomials]
        return [list(row) for row in zip(*cols)] if cols else []

    def variable_matrices(self):
        if self._var_mats is None:
            self._var_mats = [self.mult_matrix(Poly.var(self.nvars, i))
                              for i in range(self.nvars)]
        return self._var_mats

    def monomial_matrix(self, exp):
        mats = self.variable_matrices()
        out = identity(self.dim)
        for i, k in enumerate(exp):
            for _ in range(k):
                out = matmul(out, mats[i])
        return out

    def distinct_points(self):
        """Rank of the trace form = number of distinct geometric points."""
        ms = [self.monomial_matrix(m) for m in self.monomials]
        gram = [[trace(matmul(a, b)) for b in ms] for a in ms]
        return rank(gram)


def char_poly(matrix):
    """det(l*I - matrix) as a univariate Poly."""
    n = len(matrix)
    lam = Poly.var(1, 0)
    rows = [[(lam if i == j else Poly.zero(1)) - Poly.constant(1, x)
             for j, x in enumerate(row)] for i, row in enumerate(matrix)]
    det = bareiss_det(rows) if n else Poly.one(1)
    if not isinstance(det, Poly):
        det = Poly.constant(1, det)
    return det


def rational_roots(p):
    """Distinct rational roots of a univariate Poly (sympy factorization)."""
    lam = sympy.Symbol("l")
    expr = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * lam ** e[0]
               for e, c in p.terms.items())
    _, factors = sympy.factor_list(sympy.Poly(expr, lam, domain="QQ"))
    roots = []
    for fac, _ in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(roots)


def _restricted_trace(mat, basis_cols):
    """Trace of ``mat`` restricted to the invariant subspace spanned by the
    given column vectors."""
    m = len(basis_cols)
    B = [list(row) for row in zip(*basis_cols)]          # n x m
    _, piv = rref([list(c) for c in basis_cols])          # independent rows of B
    rows = piv[:m]
    BR = [[B[r][j] for j in range(m)] for r in rows]
    MB = matmul(mat, B)
    MBR = [[MB[r][j] for j in range(m)] for r in rows]
    # A = BR^{-1} MBR; trace(A) = trace(BR^{-1} MBR)
    aug = [BR[i] + MBR[i] for i in range(m)]
    red, _ = rref(aug)
    return sum(red[i][m + i] for i in range(m))


def solve_zero_dim(polys, nvars, rng, retries=None, expected_length=None):
    """Rational points of ``V(polys)`` with multiplicities.

    ``rng`` drives the separating linear form; ``retries`` defaults to the
    active fiber-retry cap.
    """
    retries = retries or caps.current().fiber_retries
    basis = groebner(polys, GREVLEX, nvars=nvars)
    alg = QuotientAlgebra(basis, nvars)
    if expected_length is not None and alg.dim != expected_length:
        raise StructuralError(f"quotient has length {alg.dim}, expected {expected_length}")
    if alg.dim == 0:
        return ZeroDimPoints((), 0, 0, Poly.one(1))
    distinct = alg.distinct_points()
    mats = alg.variable_matrices()
    bound = 3
    for attempt in range(retries):
        coeffs = [rng.randint(-bound, bound) for _ in range(nvars)]
        if not any(coeffs):
            continue
        Mu = [[sum(c * m[i][j] for c, m in zip(coeffs, mats)) for j in range(alg.dim)]
              for i in range(alg.dim)]
        chi = char_poly(Mu)
        if squarefree_part(chi).degree() != distinct:
            bound += 1 + attempt // 4
            continue
        points = []
        for r in rational_roots(chi):
            lin = Poly(1, {(1,): 1, (0,): -r})
            mult = divisibility_order(lin, chi)
            V = nullspace(mat_pow(mat_sub_scalar(Mu, r), mult))
            assert len(V) == mult
            coords = tuple(_restricted_trace(M, V) / mult for M in mats)
            points.append((coords, mult))
        points.sort()
        return ZeroDimPoints(tuple(points), alg.dim, distinct, chi)
    raise GenericityExhausted(f"no separating linear form after {retries} tries", cap="fiber_retries")


def irreducible_factors(p):
    """Irreducible factors over Q of a multivariate Poly, as normalized
    ``(factor, exponent)`` pairs sorted canonically (sympy factorization)."""
    gens = sympy.symbols(f"x0:{p.nvars}")
    expr = sympy.Add(*[sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                       * sympy.Mul(*[g ** k for g, k in zip(gens, e)])
                       for e, c in p.terms.items()])
    _, factors = sympy.factor_list(sympy.Poly(expr, *gens, domain="QQ"))
    out = []
    for fac, k in factors:
        terms = {tuple(int(x) for x in m): Fraction(int(c.p), int(c.q))
                 for m, c in fac.terms()}
        out.append((Poly(p.nvars, terms).normalize(), int(k)))
    out.sort(key=lambda fk: (fk[0].degree(), str(fk[0])))
    return out
