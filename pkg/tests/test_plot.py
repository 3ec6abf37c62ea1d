import xml.etree.ElementTree as ET

from zonetsp import Instance, auto_zone
from zonetsp.plot import boundary_polyline, render_svg

from conftest import ATT48_REFERENCE

NS = {"s": "http://www.w3.org/2000/svg"}


def test_att48_structure(att48, att48_plan):
    svg = render_svg(att48, att48_plan, ATT48_REFERENCE)
    root = ET.fromstring(svg.split("\n", 1)[1])
    assert root.get("version") == "1.1"
    assert len(root.findall(".//s:circle", NS)) == 48
    labels = sorted(int(t.text) for t in root.findall(".//s:g[@id='vertices']/s:text", NS))
    assert labels == list(range(1, 49))
    assert len(root.findall(".//s:polyline[@class='boundary']", NS)) == 9
    tour = root.find(".//s:polygon[@id='tour']", NS)
    assert len(tour.get("points").split()) == 48


def test_deterministic(att48, att48_plan):
    assert render_svg(att48, att48_plan) == render_svg(att48, att48_plan)


def test_single_vertex():
    inst = Instance.from_coords([(3, 4)])
    svg = render_svg(inst, auto_zone(inst, 1))
    assert svg.count("<circle") == 1
    assert 'class="boundary"' not in svg


def test_straight_boundary_when_separated():
    inst = Instance.from_coords([(0, 0), (1, 5), (10, 0), (11, 5)])
    line = boundary_polyline(inst, [1, 2], [3, 4], pad=1)
    assert {x for x, _ in line} == {5.5}


def test_zigzag_boundary_separates_overlapping_zones(att48, att48_plan):
    left, right = att48_plan[4], att48_plan[5]
    line = boundary_polyline(att48, sorted(left.own_vertices), sorted(right.own_vertices), pad=5)
    assert len(line) > 2
    for v in left.own_vertices:
        x, y = att48.xy(v)
        assert any(abs(py - y) < 1e-9 and px > x for px, py in line)
    for v in right.own_vertices:
        x, y = att48.xy(v)
        assert any(abs(py - y) < 1e-9 and px < x for px, py in line)
