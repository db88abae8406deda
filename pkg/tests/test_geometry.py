import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxcolor.conflict import build_graph
from boxcolor.errors import DomainError, EmptyRegion, OverlappingBoxes
from boxcolor.geometry import (
    Arrangement,
    AxisRemap,
    Box,
    Interval,
    SegmentProbe,
    contact,
    region_from_probe,
    remap,
    validate,
)
from conftest import oracle_contact, oracle_probe


def unit(id, x=(0, 1), y=(0, 1), z=(0, 1)):
    return Box.of(id, x, y, z)


def test_box_measures():
    b = Box.of("b", (0, 2), (0, 3), (1, 5))
    assert b.sides == (2, 3, 4)
    assert b.surface == 2 * (6 + 12 + 8)
    assert b.volume == 24
    assert b.min_side == 2


def test_contact_full_face():
    assert contact(unit("a"), unit("b", x=(1, 2)))


def test_contact_edge_only_is_not_contact():
    assert not contact(unit("a"), unit("b", x=(1, 2), y=(1, 2)))


def test_contact_corner_only_is_not_contact():
    assert not contact(unit("a"), unit("b", (1, 2), (1, 2), (1, 2)))


def test_contact_figure2_boxes_apart():
    # B and D2 of gadget X, in figure units
    s = Box.of("S", (0, 3), (1, 2), (0, 1))
    d2 = Box.of("D2", (2, 3), (3, 4), (0, 1))
    assert not contact(s, d2)
    assert not oracle_contact([(0, 3), (1, 2), (0, 1)], [(2, 3), (3, 4), (0, 1)])


def test_contact_raises_on_overlap():
    with pytest.raises(OverlappingBoxes):
        contact(unit("a"), unit("b"))


box_coords = st.tuples(
    *[st.tuples(st.integers(-3, 3), st.integers(1, 3)).map(lambda t: (t[0], t[0] + t[1])) for _ in range(3)]
)


@given(box_coords, box_coords)
@settings(max_examples=300, deadline=None)
def test_contact_symmetric_and_matches_oracle(ca, cb):
    a, b = Box.of("a", *ca), Box.of("b", *cb)
    interiors = all(min(p[1], q[1]) - max(p[0], q[0]) > 0 for p, q in zip(ca, cb))
    if interiors:
        with pytest.raises(OverlappingBoxes):
            contact(a, b)
        return
    assert contact(a, b) == contact(b, a) == oracle_contact(ca, cb)
    if contact(a, b):
        # closed bodies meet
        assert all(max(p[0], q[0]) <= min(p[1], q[1]) for p, q in zip(ca, cb))


def test_validate_overlap_reported():
    rep = validate(Arrangement((unit("a"), unit("b"))))
    assert not rep.ok
    assert [v.kind for v in rep.violations] == ["overlap"]
    assert rep.violations[0].ids == ("a", "b")


def test_validate_gadget_x_ok(gadget_x):
    assert validate(gadget_x).ok


def test_validate_empty_interval():
    rep = validate(Arrangement((Box.of("a", (0, 0), (0, 1), (0, 1)),)))
    assert [v.kind for v in rep.violations] == ["empty_interval"]


def test_validate_duplicate_and_unknown_region():
    arr = Arrangement((unit("a"), unit("a", x=(5, 6))), {"R": {"a", "zz"}})
    kinds = sorted(v.kind for v in validate(arr).violations)
    assert kinds == ["duplicate_id", "unknown_region_member"]


@pytest.mark.parametrize("x, expected", [(1, 4), (3, 4), (5, 5)])
def test_probe_region_sizes_match_sampling_oracle(gadget_x, x, expected):
    got = region_from_probe(gadget_x, SegmentProbe(1, Interval(1, 9), (x, 0)))
    assert got == oracle_probe(gadget_x, 1, 1, 9, (x, 0))
    assert len(got) == expected


def test_probe_x1_members(gadget_x):
    assert region_from_probe(gadget_x, SegmentProbe(1, Interval(1, 9), (1, 0))) == {"A", "B", "C1", "T"}


def test_probe_outside_raises(gadget_x):
    with pytest.raises(EmptyRegion):
        region_from_probe(gadget_x, SegmentProbe(1, Interval(1, 9), (50, 0)))


@given(st.integers(0, 9), st.integers(1, 10), st.integers(0, 3), st.sampled_from([1, 3, 5]))
@settings(max_examples=100, deadline=None)
def test_probe_monotone(lo, length, grow, x):
    from boxcolor.constructions import build_gadget_x

    arr = build_gadget_x()
    small = SegmentProbe(1, Interval(lo, lo + length), (x, 0))
    big = SegmentProbe(1, Interval(lo - grow, lo + length + grow), (x, 0))
    try:
        inner = region_from_probe(arr, small)
    except EmptyRegion:
        return
    assert inner <= region_from_probe(arr, big)


def test_remap_identity(gadget_x):
    assert remap(gadget_x, AxisRemap()) == gadget_x


def test_remap_doubling_preserves_graph(gadget_y):
    doubled = remap(gadget_y, AxisRemap.scaling(2, 40))
    assert build_graph(doubled).edges == build_graph(gadget_y).edges
    assert doubled.box("X1.T").extent[0] == Interval(0, 4)


def test_remap_domain_error(gadget_x):
    m = AxisRemap((((0, 0), (5, 5)), None, None))
    with pytest.raises(DomainError):
        remap(gadget_x, m)


def test_remap_non_integer_image_rejected():
    m = AxisRemap((((0, 0), (3, 2)), None, None))
    with pytest.raises(DomainError):
        m.apply(0, 1)


def test_axis_remap_rejects_non_monotone():
    with pytest.raises(ValueError):
        AxisRemap((((0, 0), (2, 2), (3, 2)), None, None))


def test_remap_permutation_moves_floor_axis(gadget_x):
    rotated = remap(gadget_x, AxisRemap(perm=(2, 0, 1)))
    assert rotated.floor_axis == 0
    assert rotated.box("A").extent == (Interval(0, 1), Interval(0, 6), Interval(0, 2))


def test_json_round_trip_and_field_order(gadget_y):
    text = gadget_y.to_json()
    data = json.loads(text)
    assert list(data)[:4] == ["scale", "floor_axis", "boxes", "regions"]
    assert list(data["boxes"][0]) == ["id", "x", "y", "z"]
    assert Arrangement.from_json(text) == gadget_y


def test_from_json_rejects_float_coordinates():
    bad = {"scale": 1, "floor_axis": 2, "boxes": [{"id": "a", "x": [0, 1.5], "y": [0, 1], "z": [0, 1]}], "regions": {}}
    with pytest.raises(ValueError):
        Arrangement.from_dict(bad)
