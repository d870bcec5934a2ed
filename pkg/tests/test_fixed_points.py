import pytest

from cyclic_slope.errors import InvalidType
from cyclic_slope.fixed_points import (
    FixedPointType,
    OutcomeKind,
    blowup_closure,
    blowup_transition,
    coprime_shift_check,
    isolated_types,
    resolvable_search,
    resolvable_types,
)


def test_type_normalisation():
    t = FixedPointType(5, 7, 3)
    assert (t.k1, t.k2) == (2, 1)
    assert FixedPointType(2, 0, 3).canonical() == (0, 2)
    with pytest.raises(InvalidType):
        FixedPointType(2, 4, 6)


def test_diagonal_blowup_gives_fixed_curve():
    out = blowup_transition(FixedPointType(1, 1, 5))
    assert out.kind is OutcomeKind.FIXED_CURVE
    assert out.children == ()


def test_transition_children():
    out = blowup_transition(FixedPointType(1, 2, 3))
    assert out.kind is OutcomeKind.TWO_POINTS
    assert sorted(c.canonical() for c in out.children) == [(1, 1), (2, 2)]
    out = blowup_transition(FixedPointType(1, 3, 4))
    assert sorted(c.canonical() for c in out.children) == [(1, 2), (2, 3)]


def test_curve_point_transition():
    out = blowup_transition(FixedPointType(0, 2, 5))
    kids = sorted(c.canonical() for c in out.children)
    assert kids == [(0, 2), (2, 3)]


def test_coprime_shift():
    assert coprime_shift_check(3) == (False, (1, 1))
    assert coprime_shift_check(2)[0]
    assert coprime_shift_check(4)[0]


def test_resolvable_search():
    assert not resolvable_search(FixedPointType(1, 2, 4))
    assert resolvable_search(FixedPointType(1, 2, 3))
    with pytest.raises(InvalidType):
        resolvable_search(FixedPointType(0, 1, 4))


def test_n3_every_isolated_type_resolves():
    assert resolvable_types(3) == frozenset(isolated_types(3))


def test_closure_contains_start():
    t = FixedPointType(1, 3, 7)
    assert (1, 3) in blowup_closure(t)


@pytest.mark.parametrize("n", range(4, 13))
def test_resolvable_iff_diagonal(n):
    good = resolvable_types(n)
    assert good == frozenset(t for t in isolated_types(n) if t[0] == t[1])
