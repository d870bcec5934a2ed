import pytest
from hypothesis import given, settings, strategies as st

from cyclic_slope.cluster import ClusterNode, FiberGerm
from cyclic_slope.errors import InvalidGerm, LedgerIncomplete
from cyclic_slope.examples import EnumerationBudget, enumerate_germs
from cyclic_slope.resolution import (
    ResolvedGerm,
    check_jp_bounds,
    euler_from_indices,
    euler_local,
    jp_report,
    resolve_germ,
    vertical_ledger,
)


def triple_point():
    return FiberGerm(
        n=2, r=6,
        nodes=(ClusterNode(1, None, 3), ClusterNode(2, 1, 2), ClusterNode(3, 1, 2), ClusterNode(4, 1, 2)),
    )


def six_roots():
    # fibre inside the branch locus, met by six smooth horizontal branches
    return FiberGerm(n=2, r=6, gamma_in_branch=True, nodes=tuple(ClusterNode(i, None, 2) for i in range(1, 7)))


def minus_three_curve():
    # n=3: E_1 (m=4) is a branch curve with two blow-ups on it, so a (-3)-curve
    return FiberGerm(n=3, r=9, nodes=(ClusterNode(1, None, 4), ClusterNode(2, 1, 3), ClusterNode(3, 1, 3)))


def test_empty_germ():
    rg = resolve_germ(FiberGerm(n=3, r=6))
    assert rg.alpha == {} and rg.j == {}
    assert (rg.alpha0_plus, rg.alpha0, rg.eps, rg.eta, rg.iota, rg.kappa) == (0, 0, 0, 0, 0, 0)
    assert vertical_ledger(rg) == []
    assert check_jp_bounds(rg)
    assert euler_local(rg) == 0


def test_double_point():
    rg = resolve_germ(FiberGerm(n=2, r=6, nodes=(ClusterNode(1, None, 2),)))
    assert rg.alpha == {1: 1} and rg.j == {}
    assert (rg.eps, rg.eta, rg.alpha0_plus, rg.alpha0) == (0, 0, 0, 0)
    assert check_jp_bounds(rg)
    assert euler_local(rg) == 2


def test_triple_point():
    rg = resolve_germ(triple_point())
    assert rg.alpha == {1: 4}
    assert rg.j == {2: 1}
    assert (rg.eta, rg.iota, rg.kappa, rg.eps, rg.alpha0_plus, rg.alpha0) == (1, 0, 0, 0, 0, -2)
    assert check_jp_bounds(rg)
    assert euler_local(rg) == 6
    fams = vertical_ledger(rg)
    assert len(fams) == 1
    assert fams[0]["curves"] == [{"curve": 1, "self_intersection": -4, "in_branch": True, "fiber_multiplicity": 1}]


def test_fibre_in_branch():
    rg = resolve_germ(six_roots())
    assert rg.j == {3: 1} and rg.eta == 1 and rg.eps == 0
    assert rg.alpha == {1: 6}
    assert euler_local(rg) == 10 == euler_from_indices(rg, 2)
    fams = vertical_ledger(rg)
    assert fams[0]["curves"][0]["self_intersection"] == -6


def test_minus_n_curve_gives_eps():
    rg = resolve_germ(minus_three_curve())
    assert rg.j == {1: 1} and rg.eps == 1
    assert rg.alpha == {1: 3}
    # (n-1)*0 + 3*3 - 5*1
    assert euler_local(rg) == 4 == euler_from_indices(rg, 3)


def test_resolve_rejects_invalid():
    with pytest.raises(InvalidGerm) as info:
        resolve_germ(FiberGerm(n=3, r=6, nodes=(ClusterNode(1, None, 2),)))
    assert info.value.violations[0].rule == "ModN"


def test_ledger_round_trip():
    rg = resolve_germ(triple_point())
    back = ResolvedGerm.from_dict(rg.to_dict())
    assert back == rg
    assert list(rg.to_dict()) == ["n", "r", "alpha", "alpha0_plus", "alpha0", "eps", "j", "eta", "iota", "kappa", "ledger"]


def test_euler_needs_ledger():
    rg = resolve_germ(triple_point())
    bare = ResolvedGerm.from_dict({**rg.to_dict(), "ledger": []})
    with pytest.raises(LedgerIncomplete):
        euler_local(bare)


def test_branch_curves_are_multiples_of_minus_n():
    for n, r in [(2, 6), (3, 9), (4, 8)]:
        for g in enumerate_germs(n, r, EnumerationBudget(max_nodes=3, max_mult=r // 2 + 1, max_contact=3)):
            for e in resolve_germ(g).ledger:
                if e.in_branch:
                    assert e.self_intersection < 0 and e.self_intersection % n == 0


_germs = [
    g
    for n, r in [(2, 6), (2, 8), (3, 6), (3, 9), (4, 12), (5, 10)]
    for g in enumerate_germs(n, r, EnumerationBudget(max_nodes=3, max_mult=r // 2 + 1, max_contact=3))
]


@settings(max_examples=200)
@given(st.sampled_from(_germs))
def test_index_identities(g):
    rg = resolve_germ(g)
    assert rg.eps == rg.j.get(1, 0)
    assert rg.iota == rg.j_total - rg.eta
    assert rg.alpha0 == rg.alpha0_plus - 2 * sum(v for a, v in rg.j.items() if a >= 2)
    assert jp_report(rg).ok
    e = euler_local(rg)
    assert e == euler_from_indices(rg, g.n)
    assert e >= 0
    assert (e == 0) == (not g.nodes and not g.gamma_in_branch and rg.alpha0_plus == 0)
