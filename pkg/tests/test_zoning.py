import pytest
from hypothesis import given, settings, strategies as st

from zonetsp import Instance, PlanError, ZoneSpec, auto_zone, enumerate_boundary_choices, load_zone_plan
from zonetsp.zoning import (BoundaryChoice, ZonePlan, format_zone_plan, perfect_matchings,
                            rotate_instance, widen_plan)

from conftest import random_instance

LINE = Instance.from_coords([(x, 0) for x in range(6)])


def spec(pool, crossings, index=1):
    return ZoneSpec(index, frozenset({100}), tuple(pool), frozenset(crossings))


def test_att48_plan_shape(att48_plan):
    assert len(att48_plan) == 10
    assert [len(z.own_vertices) for z in att48_plan] == [3, 3, 7, 6, 6, 8, 7, 5, 2, 1]
    assert att48_plan[3].allowed_crossings == {2, 4}
    assert att48_plan[8].loop_boundary


def test_zone1_choices(att48_plan):
    got = [str(c) for c in enumerate_boundary_choices(att48_plan[0])]
    assert got == ["26-10", "26-24", "10-24"]


def test_zone2_has_fifteen_choices(att48_plan):
    assert len(enumerate_boundary_choices(att48_plan[1])) == 15


def test_zone4_counts(att48_plan):
    choices = enumerate_boundary_choices(att48_plan[3])
    assert sum(c.n == 2 for c in choices) == 15
    assert sum(c.n == 4 for c in choices) == 45


def test_loop_choice(att48_plan):
    (only,) = enumerate_boundary_choices(att48_plan[8])
    assert only.matching == ((17, 17),)
    assert only.n == 2


def test_perfect_matchings_order():
    assert list(perfect_matchings("abcd")) == [
        (("a", "b"), ("c", "d")), (("a", "c"), ("b", "d")), (("a", "d"), ("b", "c"))]
    assert len(list(perfect_matchings(range(6)))) == 15
    assert list(perfect_matchings([])) == [()]


@pytest.mark.parametrize("b", range(2, 11))
def test_subset_count(b):
    pool = list(range(1, b + 1))
    choices = enumerate_boundary_choices(spec(pool, range(2, b + 1, 2)))
    assert len({c.chosen for c in choices}) == 2 ** (b - 1) - 1


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9), st.integers(2, 8))
def test_choices_are_well_formed(b, cap):
    pool = tuple(range(10, 10 + b))
    allowed = [n for n in range(2, min(b, cap) + 1, 2)]
    choices = enumerate_boundary_choices(spec(pool, allowed))
    assert len(set(choices)) == len(choices)
    assert [c.n for c in choices] == sorted(c.n for c in choices)
    for c in choices:
        assert c.n in allowed
        assert sorted(v for p in c.matching for v in p) == sorted(c.chosen)
        assert [pool.index(v) for v in c.chosen] == sorted(pool.index(v) for v in c.chosen)


def test_config_round_trip(att48, att48_plan):
    assert load_zone_plan(format_zone_plan(att48_plan), att48) == att48_plan


@pytest.mark.parametrize("text,match", [
    ("zone 1: 1 2 3\nzone 2: 3 4 5 6\nboundary 1: 4 5", "already in an earlier zone"),
    ("zone 1: 1 2 3\nzone 2: 4 5\nboundary 1: 4 5", "not assigned"),
    ("zone 1: 1 2 3\nzone 2: 4 5 6\nboundary 1: 2 4", "is not in zone 2"),
    ("zone 1: 1 2 3\nzone 2: 4 5 6", "empty boundary pool"),
    ("zone 1: 1 2 3\nzone 2: 4 5 6\nboundary 1: 4 5\ncrossings 1: 4", "exceeds pool size"),
    ("zone 1: 1 2 3\nzone 2: 4 5 6\nboundary 1: 4 5\ncrossings 1: 3", "even"),
    ("zone 1: 1 2\nzone 2: 3 4\nzone 3: 5 6\nboundary 1: 3\nboundary 2: 5 6", "one-vertex pool"),
    ("zone 1: 1 2 3\nzone 2: 4 5 6\nboundary 1: 4\nboundary 2: 1", "last zone"),
    ("zone 1: 1 2 3\nzone 3: 4 5 6", "consecutively"),
    ("zone 1: 1 2 3 x", "non-integer"),
    ("region 1: 1", "cannot parse"),
    ("", "no zones"),
    ("zone 1: 1 2 3 4 5 6\nzone 1: 1", "duplicate"),
    ("zone 1: 1 2 3 4 5 6 7", "not in instance"),
])
def test_plan_errors(text, match):
    with pytest.raises(PlanError, match=match):
        load_zone_plan(text, LINE)


def test_comments_and_default_crossings():
    plan = load_zone_plan("# two zones\nzone 1: 1 2 3  # left\nboundary 1: 4 5\nzone 2: 4 5 6\n", LINE)
    assert plan[0].allowed_crossings == {2}
    assert plan[1].allowed_crossings == frozenset()


def test_boundary_choice_str():
    assert str(BoundaryChoice((1, 2, 3, 4), ((1, 2), (3, 4)))) == "1-2 3-4"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 20), st.integers(1, 6),
       st.one_of(st.none(), st.sampled_from([2, 4])))
def test_auto_zone_invariants(seed, n, size, max_n):
    inst = random_instance(seed, n)
    size = min(size, n)
    plan = auto_zone(inst, size, max_n)
    sizes = [len(z.own_vertices) for z in plan]
    assert sum(sizes) == n
    assert max(sizes) - min(sizes) <= 1
    assert max(sizes) <= size
    for a, b in zip(plan.zones, plan.zones[1:]):
        assert set(a.boundary_candidates) == b.own_vertices
        assert max(inst.xy(v)[0] for v in a.own_vertices) <= min(inst.xy(v)[0] for v in b.own_vertices)
        for c in a.allowed_crossings:
            assert c % 2 == 0
            assert max_n is None or c <= max_n
    plan.validate(inst)


def test_auto_zone_bad_target():
    with pytest.raises(PlanError):
        auto_zone(LINE, 0)
    with pytest.raises(PlanError):
        auto_zone(LINE, 7)


def test_widen_plan(att48, att48_plan):
    wide = widen_plan(att48_plan, att48, max_n=4)
    assert [z.own_vertices for z in wide] == [z.own_vertices for z in att48_plan]
    assert set(wide[1].boundary_candidates) == att48_plan[2].own_vertices
    assert wide[8].loop_boundary


def test_rotation_changes_zoning_only():
    inst = Instance.from_coords([(0, 0), (0, 10), (0, 20), (1, 30)])
    turned = rotate_instance(inst, 90)
    assert rotate_instance(inst, 0) is inst
    plan = auto_zone(turned, 2)
    assert plan[0].own_vertices == {3, 4}
    assert ZonePlan(plan.zones).validate(inst)


def test_zone_spec_checks():
    with pytest.raises(PlanError):
        ZoneSpec(1, frozenset())
    with pytest.raises(PlanError):
        ZoneSpec(1, frozenset({1}), (2, 2))
