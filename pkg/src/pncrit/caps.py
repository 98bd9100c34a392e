"""Resource guardrails.

Elimination can blow up; every expensive routine checks the active caps and
raises :class:`ResourceCapExceeded` instead of stalling.
"""

import contextlib
import dataclasses
import json
import os

from .errors import ResourceCapExceeded


@dataclasses.dataclass(frozen=True)
class Caps:
    max_degree: int = 64
    max_bits: int = 2 ** 20
    K: int = 6
    L: int = 3
    M: int = 8
    fiber_retries: int = 32
    max_pairs: int = 200_000

    def __post_init__(self):
        for field in dataclasses.fields(self):
            if getattr(self, field.name) <= 0:
                raise ValueError(f"cap {field.name} must be positive")

    def replace(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_env(cls, base=None):
        """Apply overrides from ``PN_CRIT_CAPS`` (a JSON object)."""
        base = base or cls()
        raw = os.environ.get("PN_CRIT_CAPS")
        if not raw:
            return base
        data = json.loads(raw)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown caps in PN_CRIT_CAPS: {sorted(unknown)}")
        return base.replace(**{k: int(v) for k, v in data.items()})


_active = Caps()


def current():
    return _active


def set_caps(caps):
    global _active
    _active = caps


@contextlib.contextmanager
def using(caps):
    global _active
    saved = _active
    _active = caps
    try:
        yield caps
    finally:
        _active = saved


def check_degree(deg, what="polynomial"):
    if deg > _active.max_degree:
        raise ResourceCapExceeded(
            f"{what} degree {deg} exceeds cap {_active.max_degree}", cap="max_degree")


def check_bits(bits, what="coefficient"):
    if bits > _active.max_bits:
        raise ResourceCapExceeded(
            f"{what} bit-size {bits} exceeds cap {_active.max_bits}", cap="max_bits")
