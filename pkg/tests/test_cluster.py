import pytest
from hypothesis import assume, given, strategies as st

from cyclic_slope.cluster import (
    BranchProfile,
    ClusterNode,
    FiberGerm,
    check_monotonicity,
    check_tc_identities,
    elementary_transform_step,
    monotonicity_violations,
    multiplicity_sequence,
    profile_from_multiplicities,
    standardize,
    transformed_multiplicity,
    validate_germ,
)
from cyclic_slope.errors import InvalidProfile, PreconditionViolated
from cyclic_slope.examples import EnumerationBudget, enumerate_germs
from cyclic_slope.verify import host_curve_failures


def triple_point(n=2, r=6):
    return FiberGerm(
        n=n,
        r=r,
        nodes=(
            ClusterNode(1, None, 3),
            ClusterNode(2, 1, 2),
            ClusterNode(3, 1, 2),
            ClusterNode(4, 1, 2),
        ),
    )


def rules(g):
    return [v.rule for v in validate_germ(g)]


def test_validate_empty_germ():
    assert validate_germ(FiberGerm(n=3, r=6)) == []


def test_validate_mod_n():
    g = FiberGerm(n=3, r=6, nodes=(ClusterNode(1, None, 2),))
    vs = validate_germ(g)
    assert [(v.rule, v.node) for v in vs] == [("ModN", 1)]


def test_validate_triple_point():
    assert validate_germ(triple_point()) == []


def test_validate_structure():
    g = FiberGerm(n=2, r=6, nodes=(ClusterNode(1, 7, 2),))
    assert rules(g) == ["Structure"]
    g = FiberGerm(n=2, r=6, nodes=(ClusterNode(1, None, 2), ClusterNode(1, None, 2)))
    assert "Structure" in rules(g)
    g = FiberGerm(n=2, r=6, nodes=(ClusterNode(1, None, 2, satellite_with=0),))
    assert rules(g) == ["Structure"]


def test_validate_branch_degree():
    assert rules(FiberGerm(n=3, r=7)) == ["BranchDegree"]


def test_validate_proximity():
    # four double points on a triple point's exceptional curve
    g = FiberGerm(
        n=2, r=8,
        nodes=(ClusterNode(1, None, 3),) + tuple(ClusterNode(i, 1, 2) for i in range(2, 6)),
    )
    assert "Proximity" in rules(g)


def test_validate_incomplete_resolution():
    # a single triple point for n=2: E_1 is in the branch and still meets it
    g = FiberGerm(n=2, r=6, nodes=(ClusterNode(1, None, 3),))
    assert "Completeness" in rules(g)


def test_validate_standardization():
    g = FiberGerm(n=2, r=6, nodes=(ClusterNode(1, None, 4),))
    assert "Standardization" in rules(g)
    assert "Standardization" not in rules_unstd(g)


def rules_unstd(g):
    return [v.rule for v in validate_germ(g, standardized=False)]


def test_validate_profile_cross_check():
    g = triple_point()
    ok = FiberGerm(n=2, r=6, nodes=g.nodes, profiles={2: BranchProfile({1: 1})})
    assert validate_germ(ok) == []
    bad = FiberGerm(n=2, r=6, nodes=g.nodes, profiles={2: BranchProfile({1: 3})})
    assert rules(bad) == ["Profile"]


def test_germ_round_trip():
    g = FiberGerm(n=2, r=6, nodes=triple_point().nodes, horizontal_contacts=(2,), profiles={2: BranchProfile({1: 1})})
    assert FiberGerm.from_dict(g.to_dict()) == g


def test_sequence_examples():
    s = multiplicity_sequence(BranchProfile({1: 2, 2: 1}), 3)
    assert s.m == (4, 3) and s.d == (1, 1) and s.types == (1, 0)
    s = multiplicity_sequence(BranchProfile({1: 2}), 2)
    assert s.m == (3, 2) and s.i_bm == 2
    s = multiplicity_sequence(BranchProfile({1: 1}), 2)
    assert s.m == (2,) and s.i_bm == 1


def test_sequence_rejects_mod_n():
    with pytest.raises(InvalidProfile):
        multiplicity_sequence(BranchProfile({1: 1}), 3)


def test_monotonicity_examples():
    assert check_monotonicity(multiplicity_sequence(BranchProfile({1: 2, 2: 1}), 3))
    assert check_monotonicity(multiplicity_sequence(BranchProfile({1: 2}), 2))
    s = multiplicity_sequence(BranchProfile({2: 4}), 5)
    assert s.m == (5, 5)
    assert check_monotonicity(s)


def test_monotonicity_detects_bad_sequences():
    from cyclic_slope.cluster import MultiplicitySequence

    assert not check_monotonicity(MultiplicitySequence((3, 4), 3))
    # n=2: a rise of one only from odd to even
    assert not check_monotonicity(MultiplicitySequence((2, 3), 2))
    # nZ+1 then nZ with no strict drop afterwards
    assert (2, 2) in monotonicity_violations(MultiplicitySequence((4, 3, 3), 3))
    # d-gap after an nZ+1 point
    assert (3, 1) in monotonicity_violations(MultiplicitySequence((5, 4), 4))


profiles = st.dictionaries(st.integers(1, 5), st.integers(0, 8), max_size=5).map(BranchProfile)


@given(profiles, st.integers(2, 6))
def test_sequence_properties(p, n):
    try:
        s = multiplicity_sequence(p, n)
    except InvalidProfile:
        assume(False)
    assume(s.m)
    assert s.m[0] == sum(p.s.values()) + 1
    assert s.m[-1] % n == 0
    assert all(x % n in (0, 1) for x in s.m)
    assert profile_from_multiplicities(s.m, n) == p
    # clauses (1) and (2) are pure combinatorics; (3) needs the host geometry
    assert {c for c, _ in monotonicity_violations(s, n)} <= {3}


def test_host_chains_of_enumerated_germs():
    count = 0
    for n, r in [(2, 6), (2, 8), (3, 6), (3, 9), (4, 8), (5, 10)]:
        for g in enumerate_germs(n, r, EnumerationBudget(max_nodes=3, max_mult=r // 2 + 1, max_contact=3)):
            assert host_curve_failures(g) == [], g.to_dict()
            count += 1
    assert count > 100


def test_tc_examples():
    rep = check_tc_identities("exceptional", [BranchProfile({1: 1})] * 3, 2)
    assert (rep.t, rep.c, rep.sum_ci, rep.sum_m) == (3, 3, 0, 6) and rep.ok
    rep = check_tc_identities("exceptional", [BranchProfile({1: 1})], 2)
    assert (rep.t, rep.c, rep.sum_m) == (1, 1, 2)
    rep = check_tc_identities("fiber", [BranchProfile({1: 1, 2: 1})] * 2, 2)
    assert (rep.t, rep.c, rep.sum_ci, rep.sum_m, rep.sum_d) == (6, 6, 4, 16, 6)


def test_tc_precondition():
    with pytest.raises(PreconditionViolated):
        check_tc_identities("fiber", [BranchProfile({1: 1})], 2)
    with pytest.raises(ValueError):
        check_tc_identities("curve", [], 2)


def test_elementary_step_examples():
    assert elementary_transform_step(4, 6, 2) == 1
    assert elementary_transform_step(4, 6, 3) == 1
    for n in range(2, 6):
        assert elementary_transform_step(4 * n, 4 * n, n) == 0
    assert transformed_multiplicity(4, 6, 2) == 2
    assert transformed_multiplicity(4, 6, 2, fiber_in_branch=True) == 3


def test_elementary_step_preconditions():
    with pytest.raises(PreconditionViolated):
        elementary_transform_step(3, 6, 2)
    with pytest.raises(PreconditionViolated):
        elementary_transform_step(5, 6, 3)
    with pytest.raises(PreconditionViolated):
        elementary_transform_step(4, 7, 2)


def test_standardize_examples():
    assert standardize([6], 6, 2) == ([0], 1)
    out, steps = standardize([4], 6, 2)
    assert steps == 1 and out[0] // 2 == 1 and out[0] <= 4
    assert standardize([], 6, 2) == ([], 0)


@given(st.integers(2, 5), st.integers(1, 6), st.data())
def test_standardize_terminates(n, k, data):
    r = n * k
    ms = data.draw(st.lists(st.integers(2, r).filter(lambda m: m % n in (0, 1)), max_size=4))
    out, steps = standardize(ms, r, n)
    assert all(2 * m <= r for m in out)
    assert steps <= sum(1 for m in ms if 2 * m > r)
