"""Blow-up tower over a fibre germ: curve ledger, singularity indices and
an independent topological Euler number."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .cluster import FIBER, FiberGerm, GermGeometry, germ_geometry, validate_germ
from .errors import IdentityViolation, InvalidGerm, LedgerIncomplete


@dataclass(frozen=True)
class CurveLedgerEntry:
    curve: int
    self_intersection: int
    in_branch: bool
    fiber_multiplicity: int
    # distinct points where the horizontal part of the branch curve meets this curve
    horizontal_points: int
    horizontal_intersection: int
    intersections: tuple[tuple[int, int], ...] = ()
    family: int | None = None

    def to_dict(self) -> dict:
        return {
            "curve": self.curve,
            "self_intersection": self.self_intersection,
            "in_branch": self.in_branch,
            "fiber_multiplicity": self.fiber_multiplicity,
            "horizontal_points": self.horizontal_points,
            "horizontal_intersection": self.horizontal_intersection,
            "intersections": [list(x) for x in self.intersections],
            "family": self.family,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CurveLedgerEntry":
        return cls(
            curve=d["curve"],
            self_intersection=d["self_intersection"],
            in_branch=d["in_branch"],
            fiber_multiplicity=d["fiber_multiplicity"],
            horizontal_points=d["horizontal_points"],
            horizontal_intersection=d["horizontal_intersection"],
            intersections=tuple(tuple(x) for x in d["intersections"]),
            family=d["family"],
        )


@dataclass(frozen=True)
class ResolvedGerm:
    n: int
    r: int
    alpha: dict[int, int] = field(default_factory=dict)
    alpha0_plus: int = 0
    alpha0: int = 0
    eps: int = 0
    j: dict[int, int] = field(default_factory=dict)
    eta: int = 0
    iota: int = 0
    kappa: int = 0
    ledger: tuple[CurveLedgerEntry, ...] = ()

    @property
    def alpha_sum(self) -> int:
        return sum(self.alpha.values())

    @property
    def j_total(self) -> int:
        return sum(self.j.values())

    def indices(self) -> "GermIndices":
        return GermIndices(alpha0=self.alpha0, alpha=dict(self.alpha), eps=self.eps)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "alpha": {str(k): v for k, v in sorted(self.alpha.items())},
            "alpha0_plus": self.alpha0_plus,
            "alpha0": self.alpha0,
            "eps": self.eps,
            "j": {str(k): v for k, v in sorted(self.j.items())},
            "eta": self.eta,
            "iota": self.iota,
            "kappa": self.kappa,
            "ledger": [e.to_dict() for e in self.ledger],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResolvedGerm":
        return cls(
            n=d["n"],
            r=d["r"],
            alpha={int(k): v for k, v in d["alpha"].items()},
            alpha0_plus=d["alpha0_plus"],
            alpha0=d["alpha0"],
            eps=d["eps"],
            j={int(k): v for k, v in d["j"].items()},
            eta=d["eta"],
            iota=d["iota"],
            kappa=d["kappa"],
            ledger=tuple(CurveLedgerEntry.from_dict(e) for e in d["ledger"]),
        )


@dataclass(frozen=True)
class GermIndices:
    """The per-fibre numbers the global formulas consume."""

    alpha0: int = 0
    alpha: dict[int, int] = field(default_factory=dict)
    eps: int = 0

    @property
    def alpha_sum(self) -> int:
        return sum(self.alpha.values())


def _families(geo: GermGeometry) -> dict[int, int]:
    """Group vertical branch curves: a branch curve born on a branch curve joins its family."""
    parent = {c: c for c in geo.curves if geo.in_branch[c]}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for q in geo.order:
        if not geo.in_branch[q]:
            continue
        for h in geo.hosts[q]:
            if geo.in_branch[h]:
                parent[find(q)] = find(h)
    roots = {}
    out = {}
    for c in geo.curves:
        if c in parent:
            root = find(c)
            out[c] = roots.setdefault(root, len(roots) + 1)
    return out


def resolve_germ(g: FiberGerm) -> ResolvedGerm:
    """Blow up every listed point and read off the indices of the fibre.

    ``alpha[k]`` counts points with ``m`` in ``{kn, kn+1}``; ``j[a]`` counts
    vertical branch curves ending as ``(-an)``-curves; ``eta`` is the number
    of families of vertical branch curves; ``iota``/``kappa`` count nZ / nZ+1
    points where two curves of one family met; ``alpha0_plus`` is the
    ramification of the horizontal branch curve over the point.
    """
    problems = validate_germ(g)
    if problems:
        raise InvalidGerm(problems)
    n, r = g.n, g.r
    geo = germ_geometry(g)
    alpha = Counter(geo.nodes[q].mult // n for q in geo.order)
    fam = _families(geo)
    j = Counter()
    for c in geo.curves:
        if geo.in_branch[c]:
            s = geo.self_intersection[c]
            if s >= 0 or s % n:
                raise IdentityViolation(f"vertical branch curve {c} has self-intersection {s}, not in -{n}Z")
            j[-s // n] += 1
    iota = kappa = 0
    for q in geo.order:
        hs = geo.hosts[q]
        if len(hs) == 2 and all(geo.in_branch[h] for h in hs):
            if geo.nodes[q].mult % n == 0:
                iota += 1
            else:
                kappa += 1
    contacts = g.horizontal_contacts
    points = sum(geo.residual.values()) + len(contacts)
    seen = sum(geo.fiber_mult[c] * geo.residual[c] for c in geo.curves) + sum(contacts)
    if seen != r:
        raise IdentityViolation(f"horizontal branch meets the total fibre {seen} times, expected r={r}")
    alpha0_plus = r - points
    eps = j.get(1, 0)
    alpha0 = alpha0_plus - 2 * sum(v for a, v in j.items() if a >= 2)
    adj = {c: Counter() for c in geo.curves}
    for e in geo.edges:
        a, b = tuple(e)
        adj[a][b] += 1
        adj[b][a] += 1
    ledger = []
    for c in geo.curves:
        hp = geo.residual[c] + (len(contacts) if c == FIBER else 0)
        hi = geo.residual[c] + (sum(contacts) if c == FIBER else 0)
        ledger.append(
            CurveLedgerEntry(
                curve=c,
                self_intersection=geo.self_intersection[c],
                in_branch=geo.in_branch[c],
                fiber_multiplicity=geo.fiber_mult[c],
                horizontal_points=hp,
                horizontal_intersection=hi,
                intersections=tuple(sorted(adj[c].items())),
                family=fam.get(c),
            )
        )
    return ResolvedGerm(
        n=n,
        r=r,
        alpha={k: v for k, v in sorted(alpha.items())},
        alpha0_plus=alpha0_plus,
        alpha0=alpha0,
        eps=eps,
        j={a: v for a, v in sorted(j.items())},
        eta=len(set(fam.values())),
        iota=iota,
        kappa=kappa,
        ledger=tuple(ledger),
    )


def vertical_ledger(rg: ResolvedGerm) -> list[dict]:
    """Vertical branch curves grouped into families, with ``j_a`` per family."""
    fams: dict[int, list[CurveLedgerEntry]] = {}
    for e in rg.ledger:
        if e.in_branch:
            fams.setdefault(e.family, []).append(e)
    out = []
    for t in sorted(fams):
        curves = fams[t]
        ja = Counter(-e.self_intersection // rg.n for e in curves)
        out.append(
            {
                "family": t,
                "curves": [
                    {
                        "curve": e.curve,
                        "self_intersection": e.self_intersection,
                        "in_branch": True,
                        "fiber_multiplicity": e.fiber_multiplicity,
                    }
                    for e in curves
                ],
                "j": {str(a): v for a, v in sorted(ja.items())},
            }
        )
    return out


@dataclass(frozen=True)
class JpReport:
    iota_identity: bool
    ramification_bound: bool
    alpha_bound: bool

    @property
    def ok(self) -> bool:
        return self.iota_identity and self.ramification_bound and self.alpha_bound


def jp_report(rg: ResolvedGerm, n: int | None = None) -> JpReport:
    n = rg.n if n is None else n
    jt = rg.j_total
    return JpReport(
        iota_identity=rg.iota == jt - rg.eta,
        ramification_bound=rg.alpha0_plus >= (n - 2) * (jt - rg.eta + 2 * rg.kappa),
        alpha_bound=rg.alpha_sum >= sum((a * n - 2) * v for a, v in rg.j.items()) + 2 * rg.eta - rg.kappa,
    )


def check_jp_bounds(rg: ResolvedGerm, n: int | None = None) -> bool:
    """``iota = j - eta`` together with both lower bounds on ``alpha0_plus`` and ``sum alpha_k``."""
    return jp_report(rg, n).ok


def euler_local(rg: ResolvedGerm, n: int | None = None, r: int | None = None) -> int:
    """Topological ``e_f`` of the fibre, computed from the curve ledger alone.

    Each curve's preimage in the cyclic cover is counted by Riemann-Hurwitz
    (branch curves map isomorphically, others are n-fold covers of P^1
    branched where they meet the branch curve); nodes of the fibre are
    subtracted with their preimage counts.  The general fibre and the
    ``eps`` contracted (-1)-curves are then removed.
    """
    n = rg.n if n is None else n
    r = rg.r if r is None else r
    if not rg.ledger:
        raise LedgerIncomplete("resolved germ carries no curve ledger")
    by_curve = {e.curve: e for e in rg.ledger}
    if FIBER not in by_curve:
        raise LedgerIncomplete("curve ledger has no entry for the fibre")
    total = 0
    for e in rg.ledger:
        if e.in_branch:
            total += 2
            continue
        b = e.horizontal_points
        for other, cnt in e.intersections:
            if other not in by_curve:
                raise LedgerIncomplete(f"curve {e.curve} meets unknown curve {other}")
            if by_curve[other].in_branch:
                b += cnt
        total += 2 * n - (n - 1) * b
    for e in rg.ledger:
        for other, cnt in e.intersections:
            if other < e.curve:
                continue
            branched = e.in_branch or by_curve[other].in_branch
            total -= cnt * (1 if branched else n)
    general = 2 * n - (n - 1) * r
    return total - general - rg.eps


def euler_from_indices(rg: ResolvedGerm | GermIndices, n: int) -> int:
    return (n - 1) * rg.alpha0 + n * sum(rg.alpha.values()) - (2 * n - 1) * rg.eps
