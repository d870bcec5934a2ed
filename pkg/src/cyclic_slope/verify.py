"""Instance-verification suites shared by the tests, the CLI and the demos.

Each check returns a list of human-readable failure strings; an empty list
means every identity and inequality held exactly.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .cluster import (
    FIBER,
    FiberGerm,
    check_monotonicity,
    check_tc_identities,
    germ_geometry,
    host_chains,
    multiplicity_sequence,
    profile_from_multiplicities,
)
from .core import FibrationParams, genus_from_r
from .errors import CyclicSlopeError
from .examples import EnumerationBudget, enumerate_germs
from .invariants import (
    GlobalModel,
    horikawa_index,
    relative_invariants,
    signature_total,
    slope_equality_check,
)
from .resolution import euler_from_indices, euler_local, jp_report, resolve_germ


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.checked} checked, {len(self.failures)} failures"


def host_curve_failures(g: FiberGerm) -> list[str]:
    """Chains of points along every vertical branch curve, checked against the sequence rules."""
    n = g.n
    geo = germ_geometry(g)
    out = []
    for c in geo.curves:
        if not geo.in_branch[c]:
            continue
        chains = host_chains(geo, c)
        profiles = []
        for chain in chains:
            mults = [geo.nodes[q].mult for q in chain]
            try:
                prof = profile_from_multiplicities(mults, n)
                seq = multiplicity_sequence(prof, n)
            except CyclicSlopeError as exc:
                out.append(f"curve {c}: chain {mults}: {exc}")
                continue
            if list(seq.m) != mults:
                out.append(f"curve {c}: chain {mults} regenerates as {list(seq.m)}")
            if not check_monotonicity(seq, n):
                out.append(f"curve {c}: chain {mults} is not monotone")
            profiles.append(prof)
        kind = "fiber" if c == FIBER else "exceptional"
        try:
            rep = check_tc_identities(kind, profiles, n)
        except CyclicSlopeError as exc:
            out.append(f"curve {c}: {exc}")
            continue
        expected_t = g.r if c == FIBER else geo.nodes[c].mult
        if rep.t != expected_t:
            out.append(f"curve {c}: t={rep.t}, expected {expected_t}")
        if -geo.self_intersection[c] != rep.a * n:
            out.append(f"curve {c}: self-intersection {geo.self_intersection[c]} but a={rep.a}")
    return out


def germ_failures(g: FiberGerm) -> list[str]:
    """Every per-germ identity: Euler oracle, family combinatorics, host chains, signs."""
    n, r = g.n, g.r
    out = []
    rg = resolve_germ(g)
    e_top = euler_local(rg)
    e_idx = euler_from_indices(rg, n)
    if e_top != e_idx:
        out.append(f"euler: topological {e_top} != index formula {e_idx}")
    if rg.eps != rg.j.get(1, 0):
        out.append("eps != j_1")
    if rg.alpha0 != rg.alpha0_plus - 2 * sum(v for a, v in rg.j.items() if a >= 2):
        out.append("alpha0 != alpha0+ - 2 sum j_a")
    jp = jp_report(rg)
    if not jp.iota_identity:
        out.append(f"iota={rg.iota} != j - eta = {rg.j_total - rg.eta}")
    if not jp.ramification_bound:
        out.append("alpha0+ lower bound fails")
    if not jp.alpha_bound:
        out.append("sum alpha lower bound fails")
    ind = horikawa_index(n, r, rg)
    if r >= 2 * n and ind < 0:
        out.append(f"Ind={ind} < 0")
    if e_top < 0:
        out.append(f"e_f={e_top} < 0")
    smooth = not g.nodes and not g.gamma_in_branch
    unramified = rg.alpha0_plus == 0
    if (e_top == 0) != (smooth and unramified):
        out.append(f"e_f={e_top} but germ smooth={smooth}, unramified={unramified}")
    if n == 2:
        only_a1 = all(k == 1 for k in rg.alpha) and rg.eps == 0
        if (ind == 0) != only_a1:
            out.append(f"n=2: Ind={ind} but only-alpha_1={only_a1}")
    out.extend(host_curve_failures(g))
    return out


def model_failures(model: GlobalModel) -> list[str]:
    out = []
    K2, chi, e = relative_invariants(model)
    if 12 * chi != K2 + e:
        out.append("Noether")
    res = slope_equality_check(model)
    if res != 0:
        out.append(f"slope equality residual {res}")
    a, b = signature_total(model)
    if a != b:
        out.append(f"signature {a} != {b}")
    if chi < 0 or (chi == 0 and (model.germs and any(not gm.empty for _, gm in model.germs) or model.generic_alpha0)):
        out.append(f"chi={chi}")
    if model.n >= 4 and model.r > model.n:
        from .bounds import upper_bound_certificate

        cert = upper_bound_certificate(model)
        if cert.verdict is False or cert.failing:
            out.append(f"upper bound: verdict={cert.verdict} failing={cert.failing}")
    return out


def sweep_params(ns=(2, 3, 4, 5), max_factor: int = 4):
    """``(n, r)`` with ``r`` a multiple of ``n`` up to ``max_factor * n`` and genus at least 2."""
    for n in ns:
        for r in range(n, max_factor * n + 1, n):
            if (n - 1) * (r - 2) >= 4:
                yield n, r


def default_budget(r: int, max_nodes: int = 4) -> EnumerationBudget:
    return EnumerationBudget(max_nodes=max_nodes, max_mult=r // 2 + 1, max_contact=3)


def models_for(n: int, r: int, germs: list[FiberGerm], extra=(0, 1, 7), pairs: int = 3):
    """Single-germ models at several ``M`` plus two-germ models at the smallest ``M``.

    Each germ is paired with the next ``pairs`` germs in enumeration order.
    """
    params = FibrationParams.from_r(n, r)
    for i, g in enumerate(germs):
        for x in extra:
            yield GlobalModel.minimal(params, [(f"p{i}", g)], extra_alpha0=x)
    for i, a in enumerate(germs):
        for j in range(i + 1, min(i + 1 + pairs, len(germs))):
            yield GlobalModel.minimal(params, [(f"p{i}", a), (f"p{j}", germs[j])])


def _threads() -> int:
    raw = os.environ.get("CYCLIC_SLOPE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_nr(args) -> tuple[int, list[str], int, list[str]]:
    n, r, max_nodes, pairs = args
    germs = list(enumerate_germs(n, r, default_budget(r, max_nodes)))
    gfail = []
    for g in germs:
        try:
            for f in germ_failures(g):
                gfail.append(f"n={n} r={r} {g.to_dict()['nodes']}: {f}")
        except CyclicSlopeError as exc:
            gfail.append(f"n={n} r={r}: {exc}")
    mcount = 0
    mfail = []
    for m in models_for(n, r, germs, pairs=pairs):
        mcount += 1
        try:
            for f in model_failures(m):
                mfail.append(f"n={n} r={r} M={m.M}: {f}")
        except CyclicSlopeError as exc:
            mfail.append(f"n={n} r={r}: {exc}")
    return len(germs), gfail, mcount, mfail


def verify_suite(params: Iterable[tuple[int, int]], max_nodes: int = 4, pairs: int = 3,
                 threads: int | None = None) -> list[SuiteResult]:
    """Run germ and model suites over the enumeration for each ``(n, r)``."""
    jobs = [(n, r, max_nodes, pairs) for n, r in params]
    threads = _threads() if threads is None else threads
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_run_nr, jobs))
    else:
        results = [_run_nr(j) for j in jobs]
    germs = SuiteResult("germ identities")
    models = SuiteResult("model identities")
    for gc, gf, mc, mf in results:
        germs.checked += gc
        germs.failures.extend(gf)
        models.checked += mc
        models.failures.extend(mf)
    return [germs, models]


def fixed_point_suite() -> SuiteResult:
    from .fixed_points import FixedPointType, coprime_shift_check, isolated_types, resolvable_search

    res = SuiteResult("fixed points")
    for n in range(4, 65):
        res.checked += 1
        ok, w = coprime_shift_check(n)
        if not ok:
            res.failures.append(f"coprime shift fails for n={n} at {w}")
    res.checked += 1
    if coprime_shift_check(3) != (False, (1, 1)):
        res.failures.append("n=3 should fail with witness (1,1)")
    for n in range(4, 25):
        for k1, k2 in isolated_types(n):
            res.checked += 1
            if resolvable_search(FixedPointType(k1, k2, n)) != (k1 == k2):
                res.failures.append(f"type ({k1},{k2}) mod {n}")
    return res


def run_all(params=None, max_nodes: int = 4) -> list[SuiteResult]:
    params = list(sweep_params()) if params is None else list(params)
    return verify_suite(params, max_nodes=max_nodes) + [fixed_point_suite()]


def genus_for(n: int, r: int) -> int:
    return genus_from_r(r, n)
