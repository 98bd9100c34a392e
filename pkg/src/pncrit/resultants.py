"""Fraction-free determinants, Jacobians and resultants."""

import itertools
from fractions import Fraction

from .errors import DegreeMismatch, NotHomogeneous, ResourceCapExceeded, StructuralError
from .poly import Poly, exact_div, homogeneous_monomials


def bareiss_det(matrix):
    """Determinant by Bareiss elimination.

    Entries may be ints, Fractions or :class:`Poly` values of one ring; every
    division performed is exact.
    """
    m = [list(row) for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise StructuralError("determinant of a non-square matrix")
    if n == 0:
        return 1
    is_poly = any(isinstance(x, Poly) for row in m for x in row)
    all_int = not is_poly and all(isinstance(x, int) for row in m for x in row)

    def div(a, b):
        if is_poly:
            return exact_div(a, b) if isinstance(b, Poly) else a * Fraction(1, 1) / b
        if all_int:
            q, r = divmod(a, b)
            assert not r
            return q
        return Fraction(a) / b

    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return _zero_like(m[0][0])
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                val = pivot * row_i[j] - mik * row_k[j]
                row_i[j] = div(val, prev) if not (isinstance(prev, int) and prev == 1) else val
            row_i[k] = _zero_like(mik)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def _zero_like(x):
    if isinstance(x, Poly):
        return Poly.zero(x.nvars)
    return 0


def _check_forms(F, nvars=None):
    if not F:
        raise StructuralError("need at least one form")
    n = F[0].nvars
    if any(f.nvars != n for f in F):
        raise StructuralError("forms disagree on variable count")
    if nvars is not None and n != nvars:
        raise StructuralError(f"expected {nvars} variables, got {n}")
    for f in F:
        if not f or not f.is_homogeneous():
            raise NotHomogeneous(f"{f} is not a nonzero homogeneous form")
    return n


def jacobian_matrix(F):
    return [[f.derivative(j) for j in range(f.nvars)] for f in F]


def jacobian_determinant(F):
    """det(dF_i/dx_j) for n+1 forms of a common degree d >= 1 in n+1 variables."""
    n = _check_forms(F)
    if len(F) != n:
        raise StructuralError(f"need {n} forms in {n} variables, got {len(F)}")
    degs = {f.degree() for f in F}
    if len(degs) != 1:
        raise DegreeMismatch(f"forms have different degrees {sorted(degs)}")
    d = degs.pop()
    if d < 1:
        raise DegreeMismatch("forms must have degree at least 1")
    det = bareiss_det(jacobian_matrix(F))
    if not isinstance(det, Poly):
        det = Poly.constant(n, det)
    assert not det or (det.is_homogeneous() and det.degree() == n * (d - 1))
    return det


def binary_coefficients(g, s, t):
    """Coefficients ``[g_0, ..., g_m]`` with ``g = sum g_i s^(m-i) t^i``;
    each ``g_i`` lives in the same ring with the s, t exponents removed."""
    if not g:
        raise StructuralError("zero binary form")
    degs = {e[s] + e[t] for e in g.terms}
    if len(degs) != 1:
        raise NotHomogeneous("not homogeneous in the binary variables")
    m = degs.pop()
    coeffs = [dict() for _ in range(m + 1)]
    for e, c in g.terms.items():
        e2 = list(e)
        e2[s] = e2[t] = 0
        coeffs[e[t]][tuple(e2)] = c
    return [Poly(g.nvars, c) for c in coeffs]


def sylvester_matrix(gc, hc):
    m, k = len(gc) - 1, len(hc) - 1
    size = m + k
    zero = _zero_like(gc[0])
    rows = []
    for i in range(k):
        rows.append([zero] * i + list(gc) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(hc) + [zero] * (size - k - 1 - i))
    return rows


def sylvester_resultant(g, h, s, t):
    """Resultant of two binary forms in variables ``s``, ``t`` (indices).

    Coefficients may involve the remaining variables; the result is a
    polynomial in the same ring that no longer involves ``s`` or ``t``.
    """
    if g.nvars != h.nvars:
        raise StructuralError("forms live in different rings")
    if s == t or not (0 <= s < g.nvars and 0 <= t < g.nvars):
        raise StructuralError("bad binary variable indices")
    gc, hc = binary_coefficients(g, s, t), binary_coefficients(h, s, t)
    if len(gc) == 1 and len(hc) == 1:
        return Poly.one(g.nvars)
    det = bareiss_det(sylvester_matrix(gc, hc))
    if not isinstance(det, Poly):
        det = Poly.constant(g.nvars, det)
    return det


def macaulay_matrix(F):
    """Macaulay matrix of ``F`` and the indices of its extraneous minor.

    Row ``m`` (a monomial of degree ``sum(d_i - 1) + 1``) holds the
    coefficients of ``(m / x_i^d_i) * F_i`` for the first ``i`` with
    ``x_i^d_i | m``; the minor is indexed by monomials divisible by two or
    more of the ``x_i^d_i``.
    """
    n = F[0].nvars
    degs = [f.degree() for f in F]
    D = sum(d - 1 for d in degs) + 1
    monos = homogeneous_monomials(n, D)
    col = {m: j for j, m in enumerate(monos)}
    rows = []
    non_reduced = []
    for idx, m in enumerate(monos):
        hits = [i for i in range(n) if m[i] >= degs[i]]
        i = hits[0]
        if len(hits) > 1:
            non_reduced.append(idx)
        shift = list(m)
        shift[i] -= degs[i]
        row = [0] * len(monos)
        for e, c in F[i].terms.items():
            row[col[tuple(a + b for a, b in zip(e, shift))]] = c
        rows.append(row)
    return rows, non_reduced


def _permute_vars(f, perm):
    return Poly(f.nvars, {tuple(e[perm[j]] for j in range(f.nvars)): c
                          for e, c in f.terms.items()})


def macaulay_resultant(F):
    """Macaulay resultant of n+1 forms in n+1 variables, as a rational.

    Uses Macaulay's quotient det(M)/det(M'); if the extraneous minor vanishes
    the variable roles are permuted and the computation retried.
    """
    n = _check_forms(F)
    if len(F) != n:
        raise StructuralError(f"need {n} forms in {n} variables")
    for perm in itertools.permutations(range(n)):
        M, idx = macaulay_matrix([_permute_vars(f, perm) for f in F])
        sub = [[M[i][j] for j in idx] for i in idx]
        dsub = bareiss_det(_rationalize(sub))
        if dsub == 0:
            continue
        dm = bareiss_det(_rationalize(M))
        val = Fraction(dm) / Fraction(dsub)
        return val.numerator if val.denominator == 1 else val
    return _generalized_char_poly(F)


def _generalized_char_poly(F):
    """Resultant via Canny's perturbation: the constant term of
    det(M - l*I) / det(M' - l*I), which never degenerates."""
    M, idx = macaulay_matrix(F)
    lam = Poly.var(1, 0)

    def shifted(rows):
        return [[Poly.constant(1, x) - (lam if i == j else 0) for j, x in enumerate(row)]
                for i, row in enumerate(rows)]

    top = bareiss_det(shifted(M))
    bottom = bareiss_det(shifted([[M[i][j] for j in idx] for i in idx]))
    if not isinstance(bottom, Poly):
        bottom = Poly.constant(1, bottom)
    if not bottom:
        raise ResourceCapExceeded("degenerate Macaulay minor even after perturbation")
    val = exact_div(top, bottom).constant_value()
    return val


def _rationalize(matrix):
    if all(isinstance(x, int) for row in matrix for x in row):
        return matrix
    return [[Fraction(x) for x in row] for row in matrix]
