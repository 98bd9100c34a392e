"""Images of hypersurfaces by modular interpolation.

For a morphism ``f`` and a squarefree form ``H`` the reduced image is the
lowest-degree form ``h`` with ``h(f(x)) = 0`` on ``V(H)``.  Conditions on the
coefficients of ``h`` come from random lines ``a + s*b``: the points of
``V(H)`` on the line are the roots of ``g(s) = H(a + s*b)``, so all of them are
handled at once by working in ``GF(p)[s]/(g)`` and no root finding is needed.
The kernel is computed modulo several word-size primes with numpy and lifted by
Chinese remaindering plus rational reconstruction.
"""

import math
import random

import numpy as np

from .poly import Poly, homogeneous_monomials

# primes below 2^31 so that products of two residues fit in int64
PRIMES_31 = (2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
             2147483543, 2147483497, 2147483489, 2147483477, 2147483423,
             2147483399, 2147483353, 2147483323, 2147483269, 2147483249,
             2147483237, 2147483179, 2147483171, 2147483137, 2147483123,
             2147483077, 2147483069, 2147483059, 2147483053, 2147483033,
             2147483029, 2147482951, 2147482949, 2147482943, 2147482937,
             2147482921, 2147482877, 2147482873, 2147482867, 2147482859,
             2147482819, 2147482817, 2147482811, 2147482801, 2147482763)


def _coeff_mod(c, p):
    if isinstance(c, int):
        return c % p
    return c.numerator * pow(c.denominator, -1, p) % p


def _restrict_to_lines(poly, A, B, p):
    """Values of ``poly(a + s b)`` as coefficient arrays (lines x (deg+1))."""
    nl = A.shape[0]
    deg = poly.degree()
    out = np.zeros((nl, deg + 1), dtype=np.int64)
    lin = [np.stack([A[:, j], B[:, j]], axis=1) for j in range(poly.nvars)]
    powers = {}

    def power(j, k):
        key = (j, k)
        if key not in powers:
            if k == 0:
                powers[key] = np.ones((nl, 1), dtype=np.int64)
            else:
                powers[key] = _polymul(power(j, k - 1), lin[j], p)
        return powers[key]

    for e, c in poly.terms.items():
        term = np.full((nl, 1), _coeff_mod(c, p), dtype=np.int64)
        for j, k in enumerate(e):
            if k:
                term = _polymul(term, power(j, k), p)
        out[:, :term.shape[1]] = (out[:, :term.shape[1]] + term) % p
    return out


def _polymul(a, b, p):
    la, lb = a.shape[1], b.shape[1]
    out = np.zeros((a.shape[0], la + lb - 1), dtype=np.int64)
    for i in range(la):
        out[:, i:i + lb] = (out[:, i:i + lb] + a[:, i:i + 1] * b % p) % p
    return out


def _reduce_mod(a, g, p):
    """Reduce each row of ``a`` modulo the monic row of ``g`` (same line)."""
    e = g.shape[1] - 1
    if a.shape[1] < e:
        a = np.concatenate([a, np.zeros((a.shape[0], e - a.shape[1]), dtype=np.int64)], axis=1)
    else:
        a = a.copy()
    for k in range(a.shape[1] - 1, e - 1, -1):
        c = a[:, k:k + 1]
        a[:, k - e:k] = (a[:, k - e:k] - c * g[:, :e] % p) % p
    return a[:, :e]


def _lines(H, nlines, p, rng):
    """Random lines meeting V(H) in deg(H) points, with monic g(s)."""
    n1 = H.nvars
    e = H.degree()
    A_rows, B_rows = [], []
    while len(A_rows) < nlines:
        A_rows.append([rng.randrange(p) for _ in range(n1)])
        B_rows.append([rng.randrange(p) for _ in range(n1)])
    A = np.array(A_rows, dtype=np.int64)
    B = np.array(B_rows, dtype=np.int64)
    G = _restrict_to_lines(H, A, B, p)
    lead = G[:, e]
    keep = lead != 0
    A, B, G = A[keep], B[keep], G[keep]
    inv = np.array([pow(int(x), -1, p) for x in G[:, e]], dtype=np.int64)
    G = G * inv[:, None] % p
    return A, B, G


def condition_matrix(F, H, D, p, rng, extra=8, oversample=1):
    """Rows: conditions ``h(f(x)) = 0`` on V(H) for degree-D forms ``h``.

    Each line contributes one point per intersection with V(H); when H is
    reducible a low-degree component saturates early, so ``oversample``
    multiplies the number of lines (capped at one line per unknown).
    """
    n1 = H.nvars
    e = H.degree()
    monos = homogeneous_monomials(n1, D)
    nlines = min(len(monos) + extra, oversample * -(-(len(monos) + extra) // e))
    A, B, G = _lines(H, nlines, p, rng)
    vals = [_reduce_mod(_restrict_to_lines(f, A, B, p), G, p) for f in F]
    one = np.zeros_like(vals[0])
    one[:, 0] = 1
    table = {(0,) * n1: one}
    for k in range(1, D + 1):
        new = {}
        for m in homogeneous_monomials(n1, k):
            j = next(i for i, x in enumerate(m) if x)
            prev = m[:j] + (m[j] - 1,) + m[j + 1:]
            new[m] = _reduce_mod(_polymul(table[prev], vals[j], p), G, p)
        table = new
    cols = [table[m].reshape(-1) for m in monos]
    return np.stack(cols, axis=1), monos


def _forward_eliminate_np(M, p):
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv], c:] = M[[piv, r], c:]
        inv = pow(int(M[r, c]), -1, p)
        M[r, c:] = M[r, c:] * inv % p
        if r + 1 < rows:
            sub = M[r + 1:, c:]
            sub -= sub[:, :1] * M[r, c:] % p
            sub %= p
        pivots.append(c)
        r += 1
    return pivots


try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

if numba is not None:
    @numba.njit(cache=True)
    def _forward_eliminate_jit(M, p):  # pragma: no cover - compiled
        rows, cols = M.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        npiv = 0
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, cols):
                    t = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = t
            # modular inverse by extended Euclid
            a, m = M[r, c], p
            x0, x1 = 1, 0
            while m:
                q = a // m
                a, m = m, a - q * m
                x0, x1 = x1, x0 - q * x1
            inv = x0 % p
            for j in range(c, cols):
                M[r, j] = M[r, j] * inv % p
            for i in range(r + 1, rows):
                f = M[i, c]
                if f != 0:
                    for j in range(c, cols):
                        M[i, j] = (M[i, j] - f * M[r, j]) % p
            pivots[npiv] = c
            npiv += 1
            r += 1
        return pivots[:npiv]


def kernel_mod(M, p):
    """Basis of the right kernel of ``M`` over GF(p) (list of int arrays).

    Forward elimination (compiled when numba is available) followed by back
    substitution.
    """
    M = np.ascontiguousarray(M % p, dtype=np.int64)
    rows, cols = M.shape
    if numba is not None:
        pivots = [int(c) for c in _forward_eliminate_jit(M, p)]
    else:
        pivots = _forward_eliminate_np(M, p)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            s = int((M[i, pc + 1:] * v[pc + 1:] % p).sum() % p)
            v[pc] = (-s) % p
        basis.append(v)
    return basis


def rational_reconstruction(a, m):
    """The fraction ``r/s`` with ``r = a s (mod m)``, ``|r|, s <= sqrt(m/2)``,
    or None."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return r1, s1


def _crt(residues, moduli):
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        t = (r - x) * pow(m, -1, q) % q
        x += m * t
        m *= q
    return x, m


def _forms_dim(nvars, degree):
    return math.comb(degree + nvars - 1, nvars - 1)


def find_degree(F, H, max_degree, seed=0, oversample=1):
    """Degree of the image form, read off one kernel at ``max_degree``.

    Degree-``max_degree`` forms vanishing on the image are the multiples of
    ``h``, a space of dimension ``dim(forms of degree max_degree - deg h)``.
    Returns ``(D, kernel_vector_or_None, prime)``; the vector is reusable when
    ``D == max_degree``.
    """
    p = PRIMES_31[0]
    rng = random.Random(seed)
    M, _ = condition_matrix(F, H, max_degree, p, rng, oversample=oversample)
    ker = kernel_mod(M, p)
    if not ker:
        return None, None, p
    for D in range(max_degree, -1, -1):
        if _forms_dim(H.nvars, max_degree - D) == len(ker):
            return D, (ker[0] if len(ker) == 1 else None), p
    return -1, None, p          # inconsistent: too few sample points


def interpolate_image(F, H, max_degree, seed=0, max_primes=len(PRIMES_31), verify=None):
    """Primitive integer form ``h`` of the image (as a Poly) or None.

    ``verify(h)`` is called on each stable reconstruction; lifting continues
    with more primes until it accepts.
    """
    oversample = 1
    while True:
        D, first, p0 = find_degree(F, H, max_degree, seed, oversample)
        if D is None or D == 0:
            return None
        if D > 0:
            h = _interpolate_at(F, H, D, first, p0, seed, max_primes, verify, oversample)
            if h is not None:
                return h
        if oversample >= H.degree():
            return None
        oversample *= 2


def _interpolate_at(F, H, D, first, p0, seed, max_primes, verify, oversample):
    monos = homogeneous_monomials(H.nvars, D)
    rng = random.Random(seed + 1)
    vectors, moduli = [], []
    lead_index = None
    previous = None
    for p in PRIMES_31[:max_primes]:
        if p == p0 and first is not None:
            ker = [first]
        else:
            M, _ = condition_matrix(F, H, D, p, rng, oversample=oversample)
            ker = kernel_mod(M, p)
        if len(ker) != 1:
            continue
        v = ker[0]
        nz = int(np.nonzero(v)[0][0])
        if lead_index is None or nz < lead_index:
            # a smaller leading index means earlier primes were unlucky
            lead_index, vectors, moduli, previous = nz, [], [], None
        elif nz > lead_index:
            continue
        v = v * pow(int(v[nz]), -1, p) % p
        vectors.append(v)
        moduli.append(p)
        current = _lift(vectors, moduli)
        if current is not None and current == previous:
            h = _to_poly(current, monos, H.nvars)
            if verify is None or verify(h):
                return h
        previous = current
    return None


def _lift(vectors, moduli):
    out = []
    for i in range(len(vectors[0])):
        x, m = _crt([int(v[i]) for v in vectors], moduli)
        rec = rational_reconstruction(x, m)
        if rec is None:
            return None
        out.append(rec)
    return out


def _to_poly(fracs, monos, nvars):
    from fractions import Fraction
    terms = {m: Fraction(r, s) for m, (r, s) in zip(monos, fracs) if r}
    return Poly(nvars, terms).normalize()


def vanishes_on(F, h, H, primes=PRIMES_31[-2:], nlines=6, seed=7):
    """Randomized check that ``h(f(x))`` vanishes on V(H) modulo fresh primes.

    A nonzero ``h∘f mod H`` survives a random line with probability at least
    ``1 - deg/p`` per prime, so two 31-bit primes make a false pass
    astronomically unlikely.
    """
    rng = random.Random(seed)
    for p in primes:
        A, B, G = _lines(H, nlines, p, rng)
        vals = [_reduce_mod(_restrict_to_lines(f, A, B, p), G, p) for f in F]
        total = np.zeros_like(vals[0])
        for e, c in h.terms.items():
            term = np.zeros_like(vals[0])
            term[:, 0] = _coeff_mod(c, p)
            for j, k in enumerate(e):
                for _ in range(k):
                    term = _reduce_mod(_polymul(term, vals[j], p), G, p)
            total = (total + term) % p
        if total.any():
            return False
    return True
