"""Fixed points of an order-``n`` automorphism of a surface and their blow-ups.

A fixed point has *type* ``(k1, k2)`` when the linearised action is
``diag(zeta**k1, zeta**k2)`` with ``zeta = exp(2*pi*i/n)``.  ``k1 == 0``
marks a smooth point of a one-dimensional fixed locus; otherwise the point
is isolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

from .errors import InvalidType


@dataclass(frozen=True)
class FixedPointType:
    k1: int
    k2: int
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise InvalidType(f"order n must be >= 2, got {self.n}")
        object.__setattr__(self, "k1", self.k1 % self.n)
        object.__setattr__(self, "k2", self.k2 % self.n)
        if gcd(gcd(self.k1, self.k2), self.n) != 1:
            raise InvalidType(f"gcd(k1, k2, n) != 1 for type ({self.k1},{self.k2}) mod {self.n}")
        if self.k2 == 0:
            # the eigenvalue pair is unordered; keep the zero exponent first
            k1 = self.k1
            object.__setattr__(self, "k1", 0)
            object.__setattr__(self, "k2", k1)

    @property
    def isolated(self) -> bool:
        return self.k1 != 0

    @property
    def diagonal(self) -> bool:
        return self.k1 == self.k2

    def canonical(self) -> tuple[int, int]:
        return tuple(sorted((self.k1, self.k2)))


class OutcomeKind(Enum):
    FIXED_CURVE = "FixedCurve"
    TWO_POINTS = "TwoPoints"


@dataclass(frozen=True)
class BlowupOutcome:
    kind: OutcomeKind
    children: tuple[FixedPointType, ...] = ()


def blowup_transition(t: FixedPointType) -> BlowupOutcome:
    """Fixed points on the exceptional curve after blowing up ``t``.

    ``(k, k)`` makes the whole exceptional curve fixed.  Otherwise there are
    exactly two fixed points, of types ``(k1, k2 - k1)`` and
    ``(k1 - k2, k2)``.  For a point ``(0, l)`` on a fixed curve this gives
    the curve point ``(0, l)`` and the isolated point ``(n - l, l)``.
    """
    n = t.n
    if t.diagonal:
        return BlowupOutcome(OutcomeKind.FIXED_CURVE)
    first = FixedPointType(t.k1, t.k2 - t.k1, n)
    second = FixedPointType(t.k1 - t.k2, t.k2, n)
    return BlowupOutcome(OutcomeKind.TWO_POINTS, (first, second))


def coprime_shift_check(n: int) -> tuple[bool, tuple[int, int] | None]:
    """Exhaustively test that ``a + 2b`` and ``2a + b`` are never both in nZ.

    Ranges over residues ``a, b`` mod ``n`` with ``gcd(a, b, n) = 1`` and
    returns ``(True, None)`` or ``(False, witness)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    for a in range(n):
        for b in range(n):
            if gcd(gcd(a, b), n) != 1:
                continue
            if (a + 2 * b) % n == 0 and (2 * a + b) % n == 0:
                return False, (a, b)
    return True, None


def isolated_types(n: int) -> list[tuple[int, int]]:
    """All canonical isolated types mod ``n`` (unordered pairs)."""
    out = []
    for k1 in range(1, n):
        for k2 in range(k1, n):
            if gcd(gcd(k1, k2), n) == 1:
                out.append((k1, k2))
    return out


def resolvable_types(n: int) -> frozenset[tuple[int, int]]:
    """Isolated types removable by some finite tree of equivariant blow-ups.

    Blow-ups at distinct points commute, so a multiset of isolated points is
    resolvable iff each member is.  The set is the least fixed point of
    "diagonal, or both children resolvable", computed by iteration over the
    finite set of types mod ``n``.
    """
    good = {t for t in isolated_types(n) if t[0] == t[1]}
    children = {}
    for t in isolated_types(n):
        if t[0] != t[1]:
            out = blowup_transition(FixedPointType(t[0], t[1], n))
            children[t] = [c.canonical() for c in out.children]
    changed = True
    while changed:
        changed = False
        for t, kids in children.items():
            if t not in good and all(k in good for k in kids):
                good.add(t)
                changed = True
    return frozenset(good)


def resolvable_search(t: FixedPointType) -> bool:
    if not t.isolated:
        raise InvalidType(f"type ({t.k1},{t.k2}) lies on a fixed curve")
    return t.canonical() in resolvable_types(t.n)


def blowup_closure(t: FixedPointType) -> set[tuple[int, int]]:
    """Canonical isolated types reachable from ``t`` by repeated blow-ups."""
    seen = set()
    stack = [t]
    while stack:
        cur = stack.pop()
        key = cur.canonical()
        if key in seen:
            continue
        seen.add(key)
        for child in blowup_transition(cur).children:
            if child.isolated:
                stack.append(child)
    return seen
