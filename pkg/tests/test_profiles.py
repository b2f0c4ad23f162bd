from fractions import Fraction as F

import pytest

from gticheck import geometry as geo
from gticheck import profiles as prof
from gticheck.systems import square_I

UNIT = geo.Box((0, 0), (1, 1))


def test_empty_profile_is_zero():
    p = prof.make_profile([])
    assert p.pieces == () and prof.integrate(prof.make_profile([]), UNIT) == 0


def test_negative_value_rejected():
    with pytest.raises(prof.ProfileError):
        prof.make_profile([(UNIT, -1)])


def test_mixed_dimension_rejected():
    with pytest.raises(geo.DimensionMismatch):
        prof.make_profile([(UNIT, 1), (geo.Box((0,), (1,)), 1)])


def test_integrate_overlap():
    p = prof.make_profile([(UNIT, 1)])
    assert prof.integrate(p, geo.Box((F(1, 2), F(1, 2)), (F(3, 2), F(3, 2)))) == F(1, 4)


@pytest.mark.parametrize("n", range(1, 7))
def test_eta_has_unit_mass_on_each_square(n):
    p = prof.make_profile([(square_I(n), 4**n)])
    assert prof.integrate(p, square_I(n)) == 1


def test_overlapping_pieces_add():
    p = prof.make_profile([(UNIT, 1), (geo.Box((0, 0), (F(1, 2), 1)), 2)])
    assert p.value_at((F(1, 4), F(1, 2))) == 3
    assert p.total_mass() == 2


def test_dilate_identity_and_1d_example():
    p = prof.make_profile([(geo.Box((1,), (2,)), 1)])
    assert prof.dilate_profile(p, ((2,),), 0) == p
    q = prof.dilate_profile(p, ((2,),), 1)
    assert q.pieces == ((geo.Box((2,), (4,)), F(1, 2)),)


def test_dilate_preserves_mass_polytope():
    tri = geo.make_polytope([((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)])
    p = prof.make_profile([(tri, 3)])
    a = ((2, 1), (0, 3))
    for j in (-2, -1, 1, 2):
        assert prof.dilate_profile(p, a, j).total_mass() == p.total_mass()


def test_aggregate():
    q1 = prof.make_profile([(UNIT, 1)])
    q2 = prof.make_profile([(geo.Box((1, 0), (2, 1)), 2)])
    agg = prof.aggregate([q1, q2])
    assert agg.total_mass() == 3
    assert prof.aggregate([q1]) == q1
    with pytest.raises(prof.ProfileError):
        prof.aggregate(infinite=True)
    assert prof.aggregate(infinite=True, closed_form=q2) == q2


def test_tail_descriptor_bounds():
    t = prof.TailDescriptor("geometric", F(1, 2), 4)
    assert t.term_bound(3) == F(1, 2)
    assert t.tail_bound(3) == F(1, 2)
    assert prof.TailDescriptor.from_dict(t.to_dict()) == t
    with pytest.raises(prof.ProfileError):
        prof.TailDescriptor("geometric", 1, 1)


def test_user_tail():
    t = prof.TailDescriptor("user", bound=lambda k: F(1, k + 1))
    assert t.tail_bound(4) == F(1, 5)
    with pytest.raises(prof.ProfileError):
        t.to_dict()
    c = prof.TailDescriptor("user", constant="1/3")
    assert prof.TailDescriptor.from_dict(c.to_dict()).constant == F(1, 3)


def test_profile_dict_round_trip():
    tri = geo.make_polytope([((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)])
    p = prof.make_profile([(UNIT, F(2, 3)), (tri, 5)])
    assert prof.profile_from_dict(prof.profile_to_dict(p)) == p
