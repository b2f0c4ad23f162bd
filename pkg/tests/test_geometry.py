from fractions import Fraction as F

import pytest

from gticheck import geometry as geo


def unit_square():
    return geo.Box((0, 0), (1, 1))


def test_box_intersection_identity():
    assert geo.intersect_boxes(unit_square(), unit_square()) == unit_square()


def test_box_intersection_overlap():
    inter = geo.intersect_boxes(unit_square(), geo.Box((F(1, 2), F(1, 2)), (F(3, 2), F(3, 2))))
    assert inter == geo.Box((F(1, 2), F(1, 2)), (1, 1))
    assert inter.volume() == F(1, 4)


def test_box_intersection_disjoint():
    assert geo.intersect_boxes(unit_square(), geo.Box((2, 2), (3, 3))) is None


def test_box_rejects_inverted_bounds():
    with pytest.raises(geo.GeometryError):
        geo.Box((1, 0), (0, 1))


@pytest.mark.parametrize(
    "offset, expected",
    [(F(1, 2), F(1, 2)), (2, 1), (-1, None)],
)
def test_clip_unit_square(offset, expected):
    clipped = geo.clip_polytope(unit_square(), ((1, 0), offset))
    if expected is None:
        assert clipped is None
    else:
        assert geo.volume(clipped) == expected


def test_clip_gives_rectangle_vertices():
    clipped = geo.clip_polytope(unit_square(), ((1, 0), F(1, 2)))
    assert sorted(clipped.vertices) == [(0, 0), (0, 1), (F(1, 2), 0), (F(1, 2), 1)]


def test_volumes_of_simple_bodies():
    assert geo.volume(geo.Box((0, 0, 0), (1, 1, 1))) == 1
    simplex = geo.make_polytope([((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)])
    assert geo.volume(simplex) == F(1, 2)
    tetra = geo.make_polytope([((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0), ((1, 1, 1), 1)])
    assert geo.volume(tetra) == F(1, 6)


def test_unbounded_halfspaces_rejected():
    with pytest.raises(geo.UnboundedRegionError):
        geo.make_polytope([((-1, 0), 0), ((0, -1), 0)])


def test_empty_halfspaces_give_none():
    assert geo.make_polytope([((1, 0), 0), ((-1, 0), -1), ((0, 1), 1), ((0, -1), 0)]) is None


def test_map_body_identity_and_diagonal():
    sq = unit_square()
    assert geo.map_body(((1, 0), (0, 1)), sq) == sq
    img = geo.map_body(((2, 0), (0, 3)), sq)
    assert img == geo.Box((0, 0), (2, 3))
    assert geo.volume(img) == 6


def test_map_body_shear_keeps_area():
    img = geo.map_body(((1, 1), (0, 1)), unit_square())
    assert isinstance(img, geo.ConvexPolytope)
    assert geo.volume(img) == 1
    assert img.contains((2, 1)) and not img.contains((0, 1))


@pytest.mark.parametrize(
    "box, expected",
    [
        (geo.Box((0, 0), (1, 1)), geo.Box((-1, -1), (1, 1))),
        (geo.Box((-F(3, 2),) * 3, (F(3, 2),) * 3), geo.Box((-3,) * 3, (3,) * 3)),
        (geo.Box((1, 0), (2, 3)), geo.Box((-1, -3), (1, 3))),
    ],
)
def test_difference_set(box, expected):
    assert geo.difference_set(box) == expected


def test_dimension_mismatch():
    with pytest.raises(geo.DimensionMismatch):
        geo.intersect(unit_square(), geo.Box((0,), (1,)))


def test_float_mode_volume():
    tri = geo.make_polytope([((-1.0, 0.0), 0.0), ((0.0, -1.0), 0.0), ((1.0, 1.0), 0.5)])
    assert geo.volume(tri) == pytest.approx(0.125, abs=1e-12)


def test_bounding_box_of_union():
    u = geo.RegionUnion((geo.Box((0, 0), (1, 1)), geo.Box((2, -1), (3, 0))))
    assert geo.bounding_box(u) == geo.Box((0, -1), (3, 1))
    assert u.contains((F(5, 2), -F(1, 2))) and not u.contains((F(3, 2), 0))


def test_ball_contains_boundary():
    b = geo.Ball((0, 0), 1)
    assert b.contains((1, 0)) and not b.contains((1, F(1, 100)))
