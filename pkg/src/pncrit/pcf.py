"""Post-critical orbits and PCF-type detection.

Orbit members are reduced hypersurfaces, so set containment
``V(H1) <= V(H2)`` is plain divisibility of the canonical squarefree forms.
Index convention: ``members[-1]`` is the reduced critical locus and
``members[m]`` is ``f^(m+1)(C_f)``.
"""

import dataclasses
import time

from . import caps
from .dynamics import critical_locus, image_hypersurface
from .errors import ResourceCapExceeded, StructuralError
from .poly import divides


@dataclasses.dataclass(frozen=True)
class PcfType:
    k: int
    ell: int

    def __post_init__(self):
        if self.k < 1 or self.ell < 0:
            raise StructuralError("period must be positive and tail non-negative")

    def as_pair(self):
        return [self.k, self.ell]


@dataclasses.dataclass(frozen=True)
class PcfCertificate:
    """``image`` = f^(k+ell)(C_f) is contained in ``base`` = f^ell(C_f)."""
    type: PcfType
    image: object
    base: object

    def check(self):
        return containment(self.image, self.base)


def containment(H1, H2):
    """Whether V(H1) is contained in V(H2) (both reduced)."""
    if H1.n != H2.n:
        raise StructuralError("hypersurfaces live on different spaces")
    return divides(H1.form, H2.form)


@dataclasses.dataclass
class PostCriticalOrbit:
    map: object
    critical: object
    members: list
    stop_reason: str = "budget"
    caps_hit: list = dataclasses.field(default_factory=list)

    @property
    def degrees(self):
        return [H.degree for H in self.members]

    def member(self, i):
        """``members[i]`` with ``i = -1`` meaning the reduced critical locus."""
        return self.critical if i == -1 else self.members[i]


def postcritical_orbit(f, M=None):
    """Iterated reduced images of C_f, stopping early at the first exact
    repetition or containment in an earlier member (including C_f itself)."""
    M = M or caps.current().M
    if M > caps.current().M:
        raise ResourceCapExceeded(f"orbit length {M} exceeds cap {caps.current().M}", cap="M")
    _, crit = critical_locus(f)
    if crit is None:
        raise StructuralError("a degree-1 map has no critical locus")
    orbit = PostCriticalOrbit(f, crit, [])
    current = crit
    for _ in range(M):
        try:
            nxt = image_hypersurface(f, current)
        except ResourceCapExceeded as exc:
            orbit.caps_hit.append(exc.cap or "unknown")
            orbit.stop_reason = "cap"
            return orbit
        earlier = [crit] + orbit.members
        orbit.members.append(nxt)
        if any(nxt == H for H in earlier):
            orbit.stop_reason = "cycle"
            return orbit
        if any(containment(nxt, H) for H in earlier):
            orbit.stop_reason = "containment"
            return orbit
        current = nxt
    return orbit


def orbit_members(f, count):
    """The first ``count`` members f^1(C_f), ..., f^count(C_f), filled
    periodically once an exact repetition appears."""
    _, crit = critical_locus(f)
    if crit is None:
        raise StructuralError("a degree-1 map has no critical locus")
    seq = [crit]                      # seq[i] = f^i(C_f)
    cycle = None
    while len(seq) <= count:
        if cycle is None:
            nxt = image_hypersurface(f, seq[-1])
            for j, H in enumerate(seq):
                if H == nxt:
                    cycle = (j, len(seq) - j)
                    break
            seq.append(nxt)
        else:
            start, period = cycle
            seq.append(seq[start + (len(seq) - start) % period])
    return crit, seq[1:count + 1]


def detect_pcf_type(f, K=None, L=None):
    """Smallest tail ``ell <= L``, then smallest period ``k <= K``, with
    f^(k+ell)(C_f) contained in f^ell(C_f); returns a certificate or None.

    None means "no type within (K, L)", not "not PCF".
    """
    cap = caps.current()
    K = K or cap.K
    L = cap.L if L is None else L
    if K > cap.K or L > cap.L:
        raise ResourceCapExceeded(f"search bounds (K={K}, L={L}) exceed caps "
                                  f"(K={cap.K}, L={cap.L})", cap="K" if K > cap.K else "L")
    needed = K + L
    if needed - 1 > cap.M:
        raise ResourceCapExceeded(f"search needs {needed - 1} orbit members, cap M={cap.M}",
                                  cap="M")
    crit, members = orbit_members(f, needed)
    seq = [crit] + members               # seq[i] = f^i(C_f)
    for ell in range(L + 1):
        for k in range(1, K + 1):
            if containment(seq[k + ell], seq[ell]):
                return PcfCertificate(PcfType(k, ell), seq[k + ell], seq[ell])
    return None


def verify_certificate(f, cert, K, L):
    """Re-check minimality: the certified containment holds and fails for all
    lexicographically smaller (ell, k) in range."""
    if not cert.check():
        return False
    crit, members = orbit_members(f, K + L)
    seq = [crit] + members
    t = cert.type
    if seq[t.k + t.ell] != cert.image or seq[t.ell] != cert.base:
        return False
    for ell in range(L + 1):
        for k in range(1, K + 1):
            if (ell, k) >= (t.ell, t.k):
                return True
            if containment(seq[k + ell], seq[ell]):
                return False
    return True


def orbit_report(f, M=None, K=None, L=None, seed=0):
    """JSON-ready summary of the post-critical orbit and detected type."""
    cap = caps.current()
    M = M or cap.M
    K = K or cap.K
    L = cap.L if L is None else L
    timings = {}
    t0 = time.perf_counter()
    orbit = postcritical_orbit(f, M)
    timings["orbit"] = round((time.perf_counter() - t0) * 1000, 3)
    chain = [orbit.critical] + orbit.members
    matrix = [[containment(a, b) for b in chain] for a in chain]
    caps_hit = list(orbit.caps_hit)
    t0 = time.perf_counter()
    cert = None
    try:
        cert = detect_pcf_type(f, K, L)
    except ResourceCapExceeded as exc:
        caps_hit.append(exc.cap or "unknown")
    timings["detect"] = round((time.perf_counter() - t0) * 1000, 3)
    return {
        "n": f.n,
        "d": f.d,
        "map_hash": f.map_hash(),
        "degrees": orbit.degrees,
        "containment": matrix,
        "type": cert.type.as_pair() if cert else None,
        "certificate": ({"image": str(cert.image.form), "base": str(cert.base.form)}
                        if cert else None),
        "bounds": {"K": K, "L": L, "M": M},
        "seed": seed,
        "timings_ms": timings,
        "caps_hit": sorted(set(caps_hit)),
    }
