import math

import pytest
from hypothesis import given, settings, strategies as st

import zonetsp
from zonetsp import Instance, ParseError, distance, parse_instance, parse_tour, tour_length
from zonetsp.tsplib import format_instance, nint, path_length, validate_tour

from conftest import ATT48_LENGTH, ATT48_REFERENCE

TRI = """NAME: tri
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
"""


def test_parse_small():
    inst = parse_instance(TRI)
    assert inst.name == "tri"
    assert inst.dimension == 3
    assert inst.metric == "EUC_2D"
    assert distance(inst, 2, 3) == 5
    assert tour_length(inst, [1, 2, 3]) == 12


def test_att48_header(att48):
    assert att48.name == "att48"
    assert att48.dimension == 48
    assert att48.metric == "ATT"


@pytest.mark.parametrize("a,b,d", [(1, 2, 1495), (1, 8, 178), (17, 27, 117), (4, 26, 102)])
def test_att_pinned_pairs(att48, a, b, d):
    assert distance(att48, a, b) == d
    assert distance(att48, b, a) == d


def test_att_rounds_up_when_truncated_below():
    # r = sqrt(1000/10) = 10 exactly; sqrt(1061/10) ~ 10.3 -> 11
    inst = Instance.from_coords([(0, 0), (30, 10), (10, 31)], metric="ATT")
    assert distance(inst, 1, 2) == 10
    assert distance(inst, 1, 3) == 11


def test_euc_rounding():
    assert nint(2.5) == 3
    assert nint(2.49) == 2
    inst = Instance.from_coords([(0, 0), (1, 1)])
    assert distance(inst, 1, 2) == 1


def test_golden_lengths(att48):
    assert tour_length(att48, ATT48_REFERENCE) == ATT48_LENGTH
    opt = parse_tour(zonetsp.data_path("att48.opt.tour").read_text())
    assert len(opt) == 48
    assert tour_length(att48, opt) == ATT48_LENGTH


@settings(max_examples=50, deadline=None)
@given(st.permutations(list(range(1, 9))), st.integers(0, 7), st.booleans())
def test_tour_length_rotation_reflection_invariant(perm, shift, flip):
    inst = Instance.from_coords([(i * 37 % 101, i * 53 % 89) for i in range(8)], metric="ATT")
    other = perm[shift:] + perm[:shift]
    if flip:
        other = other[::-1]
    assert tour_length(inst, perm) == tour_length(inst, other)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4)),
                min_size=2, max_size=12))
def test_metric_properties(pts):
    for metric in ("ATT", "EUC_2D"):
        inst = Instance.from_coords(pts, metric=metric)
        for i in inst.vertices:
            assert distance(inst, i, i) == 0
            for j in inst.vertices:
                d = distance(inst, i, j)
                assert d == distance(inst, j, i)
                (x1, y1), (x2, y2) = inst.xy(i), inst.xy(j)
                r = math.hypot(x1 - x2, y1 - y2)
                if metric == "ATT":
                    assert r / math.sqrt(10) <= d < r / math.sqrt(10) + 1
                else:
                    assert abs(d - r) <= 0.5


def test_format_round_trip(att48):
    assert parse_instance(format_instance(att48)) == att48


def test_path_length_open():
    inst = parse_instance(TRI)
    assert path_length(inst, [1, 2, 3]) == 8
    assert path_length(inst, [2]) == 0


@pytest.mark.parametrize("text,match", [
    ("NAME: x\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n", "missing DIMENSION"),
    ("DIMENSION: 1\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n", "unsupported EDGE_WEIGHT_TYPE"),
    ("DIMENSION: 2\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\n1 1 1\n", "duplicate vertex id 1"),
    ("DIMENSION: 2\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\n3 1 1\n", "out of range"),
    ("DIMENSION: 2\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\n2 a 1\n", "non-numeric"),
    ("DIMENSION: 3\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n", "dimension mismatch"),
    ("DIMENSION: 1\nNODE_COORD_SECTION\n1 0 0\n", "missing EDGE_WEIGHT_TYPE"),
])
def test_parse_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_instance(text)


def test_parse_error_line_number():
    text = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\n2 x 1\n"
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.lineno == 5
    assert str(info.value).startswith("line 5:")


def test_parse_tour_formats():
    assert parse_tour("3\n1\n2\n") == [3, 1, 2]
    wrapped = "NAME: t\nTYPE: TOUR\nDIMENSION: 3\nTOUR_SECTION\n2\n3\n1\n-1\nEOF\n"
    assert parse_tour(wrapped) == [2, 3, 1]
    with pytest.raises(ParseError, match="non-integer"):
        parse_tour("1\nx\n")


def test_validate_tour():
    inst = parse_instance(TRI)
    validate_tour(inst, [3, 1, 2])
    with pytest.raises(ValueError, match="not a permutation"):
        validate_tour(inst, [1, 1, 2])
    with pytest.raises(ValueError, match="not a permutation"):
        validate_tour(inst, [1, 2])
    with pytest.raises(ValueError, match="out of range"):
        validate_tour(inst, [1, 2, 4])


def test_single_vertex():
    assert tour_length(Instance.from_coords([(5, 5)]), [1]) == 0


def test_bad_instance_construction():
    with pytest.raises(ValueError):
        Instance.from_coords([])
    with pytest.raises(ValueError):
        Instance.from_coords([(0, 0)], metric="MAN_2D")
    with pytest.raises(ValueError):
        distance(Instance.from_coords([(0, 0)]), 1, 2)
