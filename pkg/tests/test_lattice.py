import csv
import io
import itertools
from fractions import Fraction as F

import pytest

from gticheck import geometry as geo
from gticheck import lattice as lat
from gticheck import linalg
from gticheck.systems import main_example_matrix

Z2 = lat.PointLattice(((1, 0), (0, 1)))
UNIT = geo.Box((0, 0), (1, 1))


def brute_count(L, region, omega=(0, 0), reach=12):
    hits = 0
    for m in itertools.product(range(-reach, reach + 1), repeat=L.rank):
        x = L.point(m)
        if region.contains(tuple(a + o for a, o in zip(x, omega))):
            hits += 1
    return hits


def test_make_subgroup_identity():
    g = lat.make_subgroup(((1, 0), (0, 1)), 2)
    assert lat.covolume(g) == 1
    assert lat.canonical_basis(lat.annihilator(g)) == lat.canonical_basis(Z2)


def test_singular_subgroup_rejected():
    with pytest.raises(linalg.SingularMatrixError):
        lat.make_subgroup(((1, 2), (2, 4)), 2)


def test_split_rank_range():
    with pytest.raises(lat.LatticeError):
        lat.make_subgroup(((1, 0), (0, 1)), 3)


@pytest.mark.parametrize("j", [1, 3, 4, 9])
def test_covolume_diag_family(j):
    assert lat.covolume(lat.make_subgroup(linalg.diag([F(1, j), j]), 2)) == 1


@pytest.mark.parametrize("literal", [False, True])
@pytest.mark.parametrize("j", [1, 3, 17])
def test_covolume_main_example(j, literal):
    a = F(1, 20)
    assert lat.covolume(lat.make_subgroup(main_example_matrix(a, j, literal), 2)) == 2 * a * j


def test_annihilator_of_scaled_lattice():
    a = F(3, 7)
    dual = lat.annihilator(lat.make_subgroup(linalg.diag([a, a, a]), 3))
    assert dual.basis == linalg.diag([1 / a] * 3)
    assert dual.weight == 1 / a**3


def test_annihilator_diag_family_points():
    j = 6
    dual = lat.annihilator(lat.make_subgroup(linalg.diag([F(1, j), j]), 2))
    assert dual.point((2, 3)) == (2 * j, F(3, j))


def test_main_example_annihilator_formula():
    a, j = F(1, 20), 3
    dual = lat.annihilator(lat.make_subgroup(main_example_matrix(a, j), 2))
    for m1, m2 in itertools.product(range(-2, 3), repeat=2):
        assert dual.point((m1, m2)) == (m1 / (2 * a) + F(m2, 2 * j), m1 / (2 * a) - F(m2, 2 * j))


def test_literal_matrix_reflects_second_coordinate():
    a, j = F(1, 20), 3
    dual = lat.annihilator(lat.make_subgroup(main_example_matrix(a, j, literal=True), 2))
    for m1, m2 in itertools.product(range(-2, 3), repeat=2):
        assert dual.point((m1, m2)) == (m1 / (2 * a) + F(m2, 2 * j), -m1 / (2 * a) + F(m2, 2 * j))


def test_annihilator_pairing_partial_rank():
    g = lat.make_subgroup(((2, 1, 0), (0, 1, 1), (1, 0, 3)), 2)
    dual = lat.annihilator(g)
    assert dual.rank == 2
    for i, col in enumerate(linalg.columns(dual.basis)):
        for k, gen in enumerate(linalg.columns(g.C)):
            # discrete generators pair to the identity, the continuous one to 0
            assert linalg.dot(col, gen) == (1 if i == k else 0)


def test_enumerate_unit_square_corners():
    pts = lat.enumerate_in_region(Z2, UNIT)
    assert [p for _, p in pts] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumerate_thin_lattice():
    L = lat.PointLattice(linalg.diag([5, F(1, 5)]))
    pts = lat.enumerate_in_region(L, UNIT)
    assert len(pts) == 6
    assert all(m[0] == 0 for m, _ in pts)


def test_main_example_window_count():
    a = F(1, 20)
    for j in (1, 2, 5, 17):
        dual = lat.annihilator(lat.make_subgroup(main_example_matrix(a, j), 2))
        pts = lat.enumerate_in_region(dual, geo.Box((-2, -2), (2, 2)))
        assert len(pts) <= 8 * j + 1
        assert all(m[0] == 0 for m, _ in pts)


def test_count_in_translate_examples():
    assert lat.count_in_translate(Z2, UNIT) == 4
    assert lat.count_in_translate(lat.PointLattice(linalg.diag([7, F(1, 7)])), UNIT) == 8
    # [0,1]^2 - (1/2, 1/2) holds only the origin
    assert lat.count_in_translate(Z2, UNIT, (F(1, 2), F(1, 2))) == 1


def test_count_matches_brute_force_polytope():
    L = lat.PointLattice(((1, F(1, 2)), (0, F(3, 4))))
    tri = geo.make_polytope([((-1, 0), 2), ((0, -1), 2), ((1, 1), 3)])
    for w in [(0, 0), (F(1, 3), F(-2, 5)), (1, 1)]:
        assert lat.count_in_translate(L, tri, w) == brute_count(L, tri, w)


def test_count_union_dedupes():
    u = geo.RegionUnion((geo.Box((0, 0), (2, 1)), geo.Box((1, 0), (3, 1))))
    assert lat.count_in_translate(Z2, u) == 8


def test_ball_count_gauss_circle():
    assert lat.count_in_translate(Z2, geo.Ball((0, 0), 5)) == 81


def test_ball_count_float_mode():
    L = lat.PointLattice(((0.5, 0.0), (0.0, 0.5)))
    assert lat.count_in_translate(L, geo.Ball((0.0, 0.0), 1.0)) == 13


def test_reduce_gives_same_points():
    L = lat.PointLattice(((1, 7), (0, 1)))
    box = geo.Box((-3, -3), (3, 3))
    plain = sorted(p for _, p in lat.enumerate_in_region(L, box))
    red = sorted(p for _, p in lat.enumerate_in_region(L, box, reduce=True))
    assert plain == red
    assert all(L.point(m) == p for m, p in lat.enumerate_in_region(L, box, reduce=True))


def test_sup_count_upper_examples():
    assert lat.sup_count_upper(Z2, UNIT) == 9
    assert lat.sup_count_upper(lat.PointLattice(((1,),)), geo.Box((0,), (F(1, 4),))) == 1


def test_sup_count_sampled():
    count, arg = lat.sup_count_sampled(Z2, UNIT, 8)
    assert count == 4 and arg == (0, 0)
    j = 10
    dual = lat.annihilator(lat.make_subgroup(linalg.diag([F(1, j), j]), 2))
    assert lat.sup_count_sampled(dual, UNIT, 8)[0] >= j + 1


def test_inf_count_sampled():
    assert lat.inf_count_sampled(Z2, geo.Box((-3, -3), (3, 3)), 16) == 36
    # every sampled translate of [0,1/2] by w in [0,1/2] contains 0
    assert lat.inf_count_sampled(lat.PointLattice(((1,),)), geo.Box((0,), (F(1, 2),)), 4) == 1


def test_inf_count_diagonal_lower_bound():
    a, r = F(1, 3), 3
    L = lat.PointLattice(((1 / a,),))
    K = 2 * r
    assert lat.inf_count_sampled(L, geo.Box((-r,), (r,)), 8) >= int(K * a)


def test_points_csv():
    text = lat.points_to_csv(lat.enumerate_in_region(lat.PointLattice(((F(1, 2),),)), geo.Box((0,), (1,))))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [["m1", "x1"], ["0", "0"], ["1", "1/2"], ["2", "1"]]


def test_canonical_basis_is_basis_invariant():
    B = ((2, 1), (0, 3))
    U = ((1, 4), (0, 1))
    assert lat.canonical_basis(lat.PointLattice(B)) == lat.canonical_basis(lat.PointLattice(linalg.matmul(B, U)))


def test_dimension_mismatch_on_count():
    with pytest.raises(geo.DimensionMismatch):
        lat.count_in_translate(Z2, geo.Box((0,), (1,)))
