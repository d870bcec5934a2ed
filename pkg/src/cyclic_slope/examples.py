"""Product-surface examples attaining the lower bound, and exhaustive germ enumeration."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, TextIO

from .bounds import SurfaceClassData
from .cluster import FIBER, ClusterNode, FiberGerm, germ_geometry, validate_germ
from .core import lambda_lower
from .errors import DegenerateExample, IdentityViolation, InvalidInput


@dataclass(frozen=True)
class ProductExampleParams:
    n: int
    h: int
    N: int
    M: int

    def __post_init__(self):
        if self.n < 2 or self.h < 0 or self.N < 1 or self.M < 1:
            raise InvalidInput(f"need n>=2, h>=0, N>=1, M>=1; got {self}")
        if self.g < 2:
            raise InvalidInput(f"derived genus g={self.g} < 2 for {self}")

    @property
    def g(self) -> int:
        n = self.n
        return n * (n - 1) * self.M // 2 + n * (self.h - 1) + 1


@dataclass(frozen=True)
class ProductExample:
    g: int
    Kf2: Fraction
    chif: Fraction
    slope: Fraction


def product_example(p: ProductExampleParams) -> ProductExample:
    """Cyclic cover of ``B x Gamma`` branched along a smooth curve in ``|n(d1 + d2)|``."""
    n, h, N, M = p.n, p.h, p.N, p.M
    K2 = Fraction(2 * n * (n - 1) * N * ((n - 1) * M + 2 * (h - 1)))
    chi = Fraction(n * (n - 1) * N * (3 * (h - 1) + (2 * n - 1) * M), 6)
    if chi == 0:
        raise DegenerateExample(f"chi_f = 0 for {p}")
    slope = K2 / chi
    lam = lambda_lower(p.g, h, n)
    if slope != lam:
        raise IdentityViolation(f"product slope {slope} != lambda {lam} for {p}")
    return ProductExample(g=p.g, Kf2=K2, chif=chi, slope=slope)


def product_surface_data(p: ProductExampleParams) -> SurfaceClassData:
    """Intersection numbers on ``B x Gamma`` for ``d = N pt x Gamma + B x M pt``."""
    return SurfaceClassData(
        n=p.n,
        h=p.h,
        g=p.g,
        Kphi2=Fraction(0),
        KphiD=Fraction(2 * p.N * (p.h - 1)),
        D2=Fraction(2 * p.N * p.M),
        chiPhi=Fraction(0),
        DGamma=Fraction(p.M),
        KphiGamma=Fraction(2 * (p.h - 1)),
    )


@dataclass(frozen=True)
class EnumerationBudget:
    max_nodes: int
    max_mult: int
    max_depth: int | None = None
    max_contact: int | None = None

    def __post_init__(self):
        if self.max_nodes < 0 or self.max_mult < 0:
            raise InvalidInput("budget entries must be non-negative")
        if self.max_depth is not None and self.max_depth < 1:
            raise InvalidInput("max_depth must be positive")

    @property
    def depth(self) -> int:
        return self.max_nodes if self.max_depth is None else min(self.max_depth, self.max_nodes)


# A tree is (mult, tag, children) with tag "free", "sat0" or "sat1"; children
# is a sorted tuple of trees.  "sat0" sits on the first curve through the
# parent point, "sat1" on the second (only when the parent is a satellite).
_TAGS = ("free", "sat0", "sat1")


def _trees(size: int, tag: str, mults: tuple[int, ...], depth: int) -> tuple:
    return _trees_cached(size, tag, mults, depth)


@lru_cache(maxsize=None)
def _trees_cached(size, tag, mults, depth):
    if size < 1 or depth < 1:
        return ()
    out = []
    child_tags = ("free", "sat0", "sat1") if tag != "free" else ("free", "sat0")
    for kids in _forests(size - 1, child_tags, mults, depth - 1):
        for m in mults:
            out.append((m, tag, kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(size, tags, mults, depth) -> tuple:
    """Multisets of trees with ``size`` nodes in total; satellite tags used at most once."""
    if size == 0:
        return ((),)
    cands = []
    for s in range(1, size + 1):
        for t in tags:
            cands.extend(_trees_cached(s, t, mults, depth))
    cands.sort(key=repr)
    sizes = [_size(t) for t in cands]
    out = []

    def rec(start, left, acc, used):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(cands)):
            t = cands[i]
            if sizes[i] > left:
                continue
            if t[1] != "free" and t[1] in used:
                continue
            nxt = i if t[1] == "free" else i + 1
            rec(nxt, left - sizes[i], acc + [t], used | ({t[1]} if t[1] != "free" else set()))

    rec(0, size, [], frozenset())
    return tuple(out)


def _size(tree) -> int:
    return 1 + sum(_size(c) for c in tree[2])


def _to_nodes(forest) -> tuple[ClusterNode, ...]:
    nodes = []
    counter = [0]

    def place(tree, parent: ClusterNode | None):
        m, tag, kids = tree
        counter[0] += 1
        nid = counter[0]
        if parent is None:
            sat = None
        elif tag == "free":
            sat = None
        elif tag == "sat0":
            sat = parent.parent if parent.parent is not None else 0
        else:
            sat = parent.satellite_with
        node = ClusterNode(nid, None if parent is None else parent.id, m, sat)
        nodes.append(node)
        for c in kids:
            place(c, node)

    for t in forest:
        place(t, None)
    return tuple(nodes)


def _contact_lists(max_contact: int | None, r: int) -> list[tuple[int, ...]]:
    if not max_contact or max_contact < 2:
        return [()]
    out = [()]

    def rec(lo, acc, total):
        for c in range(lo, max_contact + 1):
            if total + c > r:
                return
            cur = acc + (c,)
            out.append(cur)
            rec(c, cur, total + c)

    rec(2, (), 0)
    return out


def enumerate_germs(n: int, r: int, budget: EnumerationBudget) -> Iterator[FiberGerm]:
    """Every valid germ within the budget, each once up to sibling order.

    Ordered by node count, then fibre-in-branch flag, then horizontal
    contacts, then a canonical form of the forest.
    """
    if n < 2 or r <= 0 or r % n:
        raise InvalidInput(f"r={r} must be a positive multiple of n={n}")
    mults = tuple(m for m in range(2, budget.max_mult + 1) if m % n in (0, 1))
    contacts = _contact_lists(budget.max_contact, r)
    for size in range(0, budget.max_nodes + 1):
        forests = _forests(size, ("free",), mults, budget.depth) if size else ((),)
        for gib in (False, True):
            # contacts only use up the fibre's residual intersection, so a
            # forest is checked once and then paired with every list that fits
            valid = []
            for forest in forests:
                g = FiberGerm(n=n, r=r, nodes=_to_nodes(forest), gamma_in_branch=gib)
                if not validate_germ(g):
                    valid.append((g, germ_geometry(g).residual[FIBER]))
            for cl in contacts if not gib else [()]:
                for g, room in valid:
                    if sum(cl) > room:
                        continue
                    if cl:
                        g = FiberGerm(n=n, r=r, nodes=g.nodes, horizontal_contacts=cl)
                        if validate_germ(g):
                            raise IdentityViolation(f"contact pruning admitted an invalid germ: {g.to_dict()}")
                    yield g


def write_ndjson(germs, fh: TextIO) -> int:
    count = 0
    for g in germs:
        fh.write(json.dumps(g.to_dict(), sort_keys=True) + "\n")
        count += 1
    return count
