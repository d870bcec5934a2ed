"""Branch-curve singularities over one fibre, described as clusters.

A :class:`FiberGerm` lists the (infinitely near) singular points of the
branch curve ``R`` lying over a point ``p`` of the base, in Enriques-diagram
style.  Curve ids: ``0`` is the fibre ``Gamma_p``; a positive id ``q`` is the
exceptional curve ``E_q`` created by blowing up node ``q``.

* A root node (``parent is None``) is a point of ``Gamma_p``.
* A node with ``parent = p`` lies on ``E_p`` (in its first neighbourhood).
  With ``satellite_with = s`` it is the intersection point of ``E_p`` with
  the strict transform of curve ``s``; ``s`` must be one of the curves the
  point ``p`` itself lay on.

``mult`` is the multiplicity of the whole branch divisor at the point,
including vertical branch curves through it.  Horizontal branches of ``R``
meeting a curve away from the listed points are smooth and transverse,
except for the explicit ``horizontal_contacts`` on ``Gamma_p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import IdentityViolation, InvalidProfile, PreconditionViolated

FIBER = 0


@dataclass(frozen=True)
class ClusterNode:
    id: int
    parent: int | None
    mult: int
    satellite_with: int | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "parent": self.parent,
            "mult": self.mult,
            "satellite_with": self.satellite_with,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ClusterNode":
        return cls(
            id=int(d["id"]),
            parent=None if d.get("parent") is None else int(d["parent"]),
            mult=int(d["mult"]),
            satellite_with=None if d.get("satellite_with") is None else int(d["satellite_with"]),
        )


@dataclass(frozen=True)
class BranchProfile:
    """Counts ``s[k]`` of virtual local branches with contact ``k`` with a host curve."""

    s: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.s).items():
            k, v = int(k), int(v)
            if k < 1 or v < 0:
                raise InvalidProfile(f"bad profile entry s[{k}]={v}")
            if v:
                clean[k] = v
        object.__setattr__(self, "s", dict(sorted(clean.items())))

    @property
    def i_max(self) -> int:
        return max(self.s, default=0)

    def tail(self, j: int) -> int:
        """Number of virtual branches with contact at least ``j``."""
        return sum(v for k, v in self.s.items() if k >= j)

    @property
    def contact(self) -> int:
        """``sum k * s_k``, the local intersection with the host."""
        return sum(k * v for k, v in self.s.items())

    def to_dict(self) -> dict:
        return {str(k): v for k, v in self.s.items()}


@dataclass(frozen=True)
class FiberGerm:
    n: int
    r: int
    nodes: tuple[ClusterNode, ...] = ()
    gamma_in_branch: bool = False
    horizontal_contacts: tuple[int, ...] = ()
    profiles: Mapping[int, BranchProfile] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "horizontal_contacts", tuple(int(c) for c in self.horizontal_contacts))
        object.__setattr__(self, "profiles", dict(self.profiles))

    def __hash__(self):
        return hash((self.n, self.r, self.nodes, self.gamma_in_branch, self.horizontal_contacts))

    @property
    def empty(self) -> bool:
        return not self.nodes and not self.gamma_in_branch and all(c == 1 for c in self.horizontal_contacts)

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "r": self.r,
            "gamma_in_branch": self.gamma_in_branch,
            "horizontal_contacts": list(self.horizontal_contacts),
            "nodes": [nd.to_dict() for nd in self.nodes],
        }
        if self.profiles:
            d["profiles"] = {str(k): p.to_dict() for k, p in sorted(self.profiles.items())}
        return d

    @classmethod
    def from_dict(cls, d: Mapping, n: int | None = None, r: int | None = None) -> "FiberGerm":
        return cls(
            n=int(d["n"] if n is None else n),
            r=int(d["r"] if r is None else r),
            nodes=tuple(ClusterNode.from_dict(x) for x in d.get("nodes", ())),
            gamma_in_branch=bool(d.get("gamma_in_branch", False)),
            horizontal_contacts=tuple(d.get("horizontal_contacts", ())),
            profiles={int(k): BranchProfile(v) for k, v in d.get("profiles", {}).items()},
        )


@dataclass(frozen=True)
class Violation:
    rule: str
    node: int | None
    message: str

    def __str__(self):
        where = "" if self.node is None else f" at node {self.node}"
        return f"{self.rule}{where}: {self.message}"


def is_branch_mult(m: int, n: int) -> bool:
    """An exceptional curve lies in the branch locus iff ``m`` is in nZ + 1."""
    return m % n == 1


@dataclass
class GermGeometry:
    """Derived incidence data of a germ, computed without judging validity."""

    order: list[int]
    nodes: dict[int, ClusterNode]
    hosts: dict[int, tuple[int, ...]]
    in_branch: dict[int, bool]
    horizontal_mult: dict[int, int]
    points_on: dict[int, list[int]]
    residual: dict[int, int]
    self_intersection: dict[int, int]
    fiber_mult: dict[int, int]
    edges: set[frozenset]
    depth: dict[int, int]

    @property
    def curves(self) -> list[int]:
        return [FIBER] + self.order


def _structure(g: FiberGerm) -> tuple[list[Violation], list[int]]:
    """Structural checks and a parent-first blow-up order."""
    out = []
    by_id = {}
    for nd in g.nodes:
        if nd.id <= 0:
            out.append(Violation("Structure", nd.id, "ids must be positive integers"))
        if nd.id in by_id:
            out.append(Violation("Structure", nd.id, "duplicate id"))
        by_id[nd.id] = nd
    for nd in g.nodes:
        if nd.parent is not None and nd.parent not in by_id:
            out.append(Violation("Structure", nd.id, f"unknown parent {nd.parent}"))
        if nd.parent is None and nd.satellite_with is not None:
            out.append(Violation("Structure", nd.id, "a point of the fibre cannot be a satellite"))
    if out:
        return out, []
    order = []
    placed = set()
    pending = sorted(by_id)
    while pending:
        progress = [i for i in pending if by_id[i].parent is None or by_id[i].parent in placed]
        if not progress:
            out.append(Violation("Structure", pending[0], "parent links form a cycle"))
            return out, []
        progress.sort(key=lambda i: (by_id[i].parent is not None, i))
        order.extend(progress)
        placed.update(progress)
        pending = [i for i in pending if i not in placed]
    # hosts: the curves through the point when it is blown up
    seen_sat = set()
    for i in order:
        nd = by_id[i]
        if nd.satellite_with is None:
            continue
        p = nd.parent
        parent_hosts = _hosts_of(by_id[p])
        if nd.satellite_with not in parent_hosts:
            out.append(
                Violation(
                    "Structure",
                    i,
                    f"curve {nd.satellite_with} does not meet E_{p} (E_{p} meets {list(parent_hosts)})",
                )
            )
        key = (p, nd.satellite_with)
        if key in seen_sat:
            out.append(Violation("Structure", i, f"satellite point E_{p} x {nd.satellite_with} listed twice"))
        seen_sat.add(key)
    return out, order


def _hosts_of(nd: ClusterNode) -> tuple[int, ...]:
    if nd.parent is None:
        return (FIBER,)
    if nd.satellite_with is None:
        return (nd.parent,)
    return (nd.parent, nd.satellite_with)


def germ_geometry(g: FiberGerm, order: list[int] | None = None) -> GermGeometry:
    if order is None:
        problems, order = _structure(g)
        if problems:
            raise PreconditionViolated("; ".join(str(v) for v in problems))
    nodes = {nd.id: nd for nd in g.nodes}
    hosts = {i: _hosts_of(nodes[i]) for i in order}
    in_branch = {FIBER: g.gamma_in_branch}
    for i in order:
        in_branch[i] = is_branch_mult(nodes[i].mult, g.n)
    hmult = {}
    for i in order:
        hmult[i] = nodes[i].mult - sum(in_branch[h] for h in hosts[i])
    points_on = {c: [] for c in [FIBER] + order}
    for i in order:
        for h in hosts[i]:
            points_on[h].append(i)
    residual = {FIBER: g.r - sum(hmult[q] for q in points_on[FIBER]) - sum(g.horizontal_contacts)}
    for i in order:
        residual[i] = hmult[i] - sum(hmult[q] for q in points_on[i])
    selfint = {FIBER: -len(points_on[FIBER])}
    for i in order:
        selfint[i] = -1 - len(points_on[i])
    fmult = {FIBER: 1}
    depth = {}
    for i in order:
        fmult[i] = sum(fmult[h] for h in hosts[i])
        p = nodes[i].parent
        depth[i] = 1 if p is None else depth[p] + 1
    edges: set[frozenset] = set()
    for i in order:
        hs = hosts[i]
        if len(hs) == 2:
            edges.discard(frozenset(hs))
        for h in hs:
            edges.add(frozenset((i, h)))
    return GermGeometry(
        order=order,
        nodes=nodes,
        hosts=hosts,
        in_branch=in_branch,
        horizontal_mult=hmult,
        points_on=points_on,
        residual=residual,
        self_intersection=selfint,
        fiber_mult=fmult,
        edges=edges,
        depth=depth,
    )


def validate_germ(g: FiberGerm, standardized: bool = True) -> list[Violation]:
    """Return every rule the germ breaks; an empty list means valid.

    Rules: ``Structure``, ``BranchDegree``, ``Multiplicity`` (m >= 2),
    ``ModN`` (m in nZ or nZ+1), ``Proximity`` (horizontal multiplicities
    never exceed what the host curves carry), ``Contact``, ``Completeness``
    (the branch curve is smooth after all blow-ups) and, when
    ``standardized``, ``Standardization`` (points of the fibre obey the
    elementary-transformation bound).
    """
    n, r = g.n, g.r
    out = []
    if n < 2 or r <= 0 or r % n:
        out.append(Violation("BranchDegree", None, f"r={r} must be a positive multiple of n={n}"))
        return out
    problems, order = _structure(g)
    if problems:
        return problems
    for nd in g.nodes:
        if nd.mult < 2:
            out.append(Violation("Multiplicity", nd.id, f"mult {nd.mult} < 2 is not a singular point"))
        if nd.mult % n not in (0, 1):
            out.append(Violation("ModN", nd.id, f"mult {nd.mult} is neither in {n}Z nor {n}Z+1"))
    for c in g.horizontal_contacts:
        if c < 1:
            out.append(Violation("Contact", None, f"contact order {c} < 1"))
    geo = germ_geometry(g, order)
    for i in order:
        if geo.horizontal_mult[i] < 0:
            out.append(
                Violation("Proximity", i, "multiplicity is smaller than the number of branch curves through the point")
            )
    for c in geo.curves:
        if geo.residual[c] < 0:
            name = "Gamma_p" if c == FIBER else f"E_{c}"
            out.append(
                Violation(
                    "Proximity", None if c == FIBER else c,
                    f"points on {name} carry more horizontal multiplicity than the curve meets",
                )
            )
    if g.gamma_in_branch and any(c > 0 for c in g.horizontal_contacts):
        out.append(Violation("Contact", None, "horizontal contacts on a fibre inside the branch locus are singular points"))
    for c in geo.curves:
        if geo.in_branch[c] and geo.residual[c] > 0:
            name = "Gamma_p" if c == FIBER else f"E_{c}"
            out.append(
                Violation(
                    "Completeness", None if c == FIBER else c,
                    f"{name} lies in the branch locus but meets horizontal branches at {geo.residual[c]} unresolved point(s)",
                )
            )
    for e in sorted(geo.edges, key=sorted):
        a, b = sorted(e)
        if geo.in_branch[a] and geo.in_branch[b]:
            out.append(Violation("Completeness", b, f"branch curves {a} and {b} still meet"))
    if standardized:
        half = r // 2
        strict_n2 = n == 2 and half % 2 == 1
        for i in order:
            if geo.nodes[i].parent is not None:
                continue
            if geo.horizontal_mult[i] > half:
                out.append(Violation("Standardization", i, f"horizontal multiplicity exceeds r/2={half}"))
            elif strict_n2 and geo.nodes[i].mult > half:
                out.append(Violation("Standardization", i, f"n=2 with g even requires mult <= r/2={half}"))
    out.extend(_profile_violations(g, geo))
    return out


def _profile_violations(g: FiberGerm, geo: GermGeometry) -> list[Violation]:
    out = []
    for nid, prof in sorted(g.profiles.items()):
        if nid not in geo.nodes:
            out.append(Violation("Profile", nid, "profile attached to an unknown node"))
            continue
        host = geo.hosts[nid][0]
        if not geo.in_branch[host]:
            out.append(Violation("Profile", nid, f"host curve {host} is not in the branch locus"))
            continue
        chain = chain_from(geo, nid, host)
        actual = [geo.nodes[q].mult for q in chain]
        try:
            expected = multiplicity_sequence(prof, g.n).m
        except InvalidProfile as exc:
            out.append(Violation("Profile", nid, str(exc)))
            continue
        if list(expected) != actual:
            out.append(Violation("Profile", nid, f"profile gives multiplicities {list(expected)}, nodes give {actual}"))
    return out


def chain_from(geo: GermGeometry, start: int, host: int) -> list[int]:
    """Points ``x_{i,1}, x_{i,2}, ...`` along strict transforms of ``host``."""
    chain = [start]
    while True:
        nxt = [q for q in geo.points_on[host] if geo.nodes[q].parent == chain[-1] and geo.nodes[q].satellite_with == host]
        if not nxt:
            return chain
        chain.append(nxt[0])


def host_chains(geo: GermGeometry, host: int) -> list[list[int]]:
    """All chains of singular points on a curve, one per point of the original curve."""
    starts = [q for q in geo.points_on[host] if geo.hosts[q][0] == host]
    return [chain_from(geo, q, host) for q in starts]


# -- multiplicity sequences along a host curve ---------------------------------


@dataclass(frozen=True)
class MultiplicitySequence:
    m: tuple[int, ...]
    n: int
    profile: BranchProfile | None = None

    @property
    def d(self) -> tuple[int, ...]:
        return tuple(x // self.n for x in self.m)

    @property
    def types(self) -> tuple[int, ...]:
        """Residue of each multiplicity: 0 for nZ, 1 for nZ+1."""
        return tuple(x % self.n for x in self.m)

    @property
    def i_bm(self) -> int:
        return len(self.m)

    @property
    def c_i(self) -> int:
        return sum(1 for x in self.m if x % self.n == 1)


def multiplicity_sequence(p: BranchProfile, n: int) -> MultiplicitySequence:
    """Multiplicities ``m_{i,1}, m_{i,2}, ...`` of the points along the host.

    ``m_{i,1} = sum_k s_k + 1`` and ``m_{i,j+1} = sum_{k > j} s_k + 1``, plus
    one more when ``m_{i,j}`` is in nZ + 1 (the exceptional curve through the
    next point then lies in the branch).  Stops at the first smooth point.
    """
    out = []
    cur = p.tail(1) + 1
    j = 1
    while cur > 1:
        if cur % n not in (0, 1):
            raise InvalidProfile(f"generated multiplicity {cur} at step {j} is neither in {n}Z nor {n}Z+1")
        out.append(cur)
        bonus = 1 if cur % n == 1 else 0
        cur = p.tail(j + 1) + 1 + bonus
        j += 1
    return MultiplicitySequence(tuple(out), n, p)


def profile_from_multiplicities(m: Iterable[int], n: int) -> BranchProfile:
    """Recover ``s_k`` from a chain of multiplicities along a branch host."""
    m = list(m)
    through = []
    for j, x in enumerate(m):
        bonus = 1 if j > 0 and m[j - 1] % n == 1 else 0
        through.append(x - 1 - bonus)
    through.append(0)
    s = {}
    for k in range(1, len(m) + 1):
        v = through[k - 1] - through[k]
        if v < 0:
            raise InvalidProfile(f"multiplicities {m} are not produced by any profile")
        if v:
            s[k] = v
    return BranchProfile(s)


def monotonicity_violations(seq: MultiplicitySequence, n: int | None = None) -> list[tuple[int, int]]:
    """``(clause, j)`` pairs for every failed clause; see :func:`check_monotonicity`."""
    n = seq.n if n is None else n
    m = list(seq.m) + [1]
    prof = seq.profile
    out = []
    for j in range(len(seq.m)):
        a, b = m[j], m[j + 1]
        if n >= 3:
            if a < b:
                out.append((1, j + 1))
            elif prof is not None:
                # m_j - m_{j+1} = s_j + [m_{j-1} in nZ+1] - [m_j in nZ+1]
                s_j = prof.s.get(j + 1, 0)
                before = 1 if j >= 1 and m[j - 1] % n == 1 else 0
                expect_equal = s_j == (1 if a % n == 1 else 0) - before
                if (a == b) != expect_equal:
                    out.append((1, j + 1))
        elif a + 1 < b or (a + 1 == b and not (a % 2 == 1 and b % 2 == 0)):
            out.append((1, j + 1))
        if j >= 1 and m[j - 1] % n == 1 and a % n == 0 and not a > b:
            out.append((2, j + 1))
        if a % n == 1 and (a // n) - (b // n) < n - 3:
            out.append((3, j + 1))
    return out


def check_monotonicity(seq: MultiplicitySequence, n: int | None = None) -> bool:
    """Monotonicity of a multiplicity sequence along a host curve.

    (1) ``m_j >= m_{j+1}`` for n >= 3; when the profile is known, equality
    holds exactly when ``s_j`` is 0 on an nZ point or 1 on an nZ+1 point,
    each lowered by one after an nZ+1 point;
    ``m_j + 1 >= m_{j+1}`` for n = 2, with equality only on an odd-to-even
    step.  (2) an nZ+1 -> nZ step is followed by a strict drop.  (3) after an
    nZ+1 point, ``d_j - d_{j+1} >= n - 3``.

    Clause (3) uses the geometry of the host curve, so an abstract profile
    may fail it; chains read off a valid germ always pass.
    """
    return not monotonicity_violations(seq, n)


@dataclass(frozen=True)
class TCReport:
    t: int
    c: int
    sum_ci: int
    sum_m: int
    sum_d: int
    a: int
    host_kind: str
    n: int

    @property
    def ok(self) -> bool:
        return self.t + self.c + self.sum_ci == self.sum_m and self.t + self.c == self.n * self.sum_d


def check_tc_identities(host_kind: str, profiles: Iterable[BranchProfile], n: int) -> TCReport:
    """Counting identities for the points on a host curve ``C`` in the branch.

    ``C`` is the fibre (``host_kind="fiber"``) or an exceptional curve that
    ends up as a ``(-an)``-curve.  With ``t = sum k s_{i,k}``,
    ``c = sum i_bm`` and ``c_i`` the number of nZ+1 entries of the i-th
    multiplicity sequence, both ``t + c + sum c_i = sum m_{i,j}`` and
    ``(t + c)/n = sum d_{i,j}`` must hold.
    """
    if host_kind not in ("fiber", "exceptional"):
        raise ValueError(f"host_kind must be 'fiber' or 'exceptional', got {host_kind!r}")
    seqs = [multiplicity_sequence(p, n) for p in profiles]
    profiles = [s.profile for s in seqs]
    t = sum(p.contact for p in profiles)
    c = sum(s.i_bm for s in seqs)
    shift = 0 if host_kind == "fiber" else 1
    if c + shift <= 0 or (c + shift) % n:
        raise PreconditionViolated(
            f"{c} blow-ups on a {host_kind} host do not produce a (-an)-curve for n={n}"
        )
    a = (c + shift) // n
    rep = TCReport(
        t=t,
        c=c,
        sum_ci=sum(s.c_i for s in seqs),
        sum_m=sum(sum(s.m) for s in seqs),
        sum_d=sum(sum(s.d) for s in seqs),
        a=a,
        host_kind=host_kind,
        n=n,
    )
    if rep.t + rep.c + rep.sum_ci != rep.sum_m:
        raise IdentityViolation(f"t + c + sum c_i = {rep.t + rep.c + rep.sum_ci} != sum m = {rep.sum_m}")
    if rep.t + rep.c != n * rep.sum_d:
        raise IdentityViolation(f"(t + c)/n = {(rep.t + rep.c)}/{n} != sum d = {rep.sum_d}")
    return rep


# -- elementary transformations -------------------------------------------------


def elementary_transform_step(m: int, r: int, n: int) -> int:
    """``[m'/n]`` after an elementary transformation centred at a point of multiplicity ``m``.

    Uses ``[m/n] + [m'/n] = r/n``; only offending points (``m > r/2``) are
    transformed.
    """
    if r <= 0 or r % n:
        raise PreconditionViolated(f"r={r} must be a positive multiple of n={n}")
    if m % n not in (0, 1):
        raise PreconditionViolated(f"m={m} is neither in {n}Z nor {n}Z+1")
    if 2 * m <= r:
        raise PreconditionViolated(f"m={m} does not exceed r/2={r / 2}")
    d_new = r // n - m // n
    assert 2 * n * d_new <= r <= 2 * n * (m // n)
    return d_new


def transformed_multiplicity(m: int, r: int, n: int, fiber_in_branch: bool = False) -> int:
    """``m'`` itself; nZ + 1 exactly when the new fibre lies in the branch locus."""
    return n * elementary_transform_step(m, r, n) + (1 if fiber_in_branch else 0)


def standardize(mults: Iterable[int], r: int, n: int, fiber_in_branch: bool = False) -> tuple[list[int], int]:
    """Transform every point with ``m > r/2`` until the bound holds.

    ``m = r/2 + 1`` is left alone when ``fiber_in_branch``.  Each step
    clears one offending point, so there are at most as many steps as
    offending points.  Returns the new multiplicities and the step count.
    """
    out = list(mults)
    steps = 0

    def offending(x):
        if 2 * x <= r:
            return False
        return not (fiber_in_branch and 2 * x == r + 2)

    while True:
        bad = [i for i, x in enumerate(out) if offending(x)]
        if not bad:
            return out, steps
        i = bad[0]
        before = out[i] // n
        out[i] = transformed_multiplicity(out[i], r, n, fiber_in_branch)
        # [m'/n] <= r/2n <= [m/n]; equality happens for m = r/2 + 1 in nZ+1
        if out[i] // n > before or offending(out[i]):
            raise IdentityViolation(f"elementary transformation left m'={out[i]} above r/2")
        steps += 1
