from fractions import Fraction as F

import pytest

from gticheck import conditions as cond
from gticheck import geometry as geo
from gticheck import lattice as lat
from gticheck import profiles as prof
from gticheck import systems


def test_example_spec_normalises_names():
    assert systems.ExampleSpec("main").name == "main_example"
    assert systems.ExampleSpec("fail-uce").name == "fail_uce"
    with pytest.raises(systems.ParameterError):
        systems.ExampleSpec("nope")


@pytest.mark.parametrize("a", [0, F(1, 10), F(1, 2), -1])
def test_main_example_rejects_bad_a(a):
    with pytest.raises(systems.ParameterError):
        systems.build_main_example(a)


def test_fail_uce_rejects_small_N():
    with pytest.raises(systems.ParameterError):
        systems.build_fail_uce(N=1)


def test_in_I_partition():
    # every dyadic sample point of [-1,1]^2 lies in exactly one I_n (n <= 12) or the complement
    pts = [(F(-1) + F(k, 64), F(-1) + F(l, 64)) for k in range(128) for l in range(128)]
    for w in pts:
        owners = [n for n in range(1, 13) if systems.in_I(n, w)]
        assert len(owners) + systems.in_I(0, w) == 1


def test_main_example_entries():
    a = F(1, 20)
    s = systems.build_main_example(a, 4)
    labels = [e.label for e in s.entries]
    assert labels == [1, 5, 17, 65, 257]
    for e in s.entries:
        assert lat.covolume(e.subgroup) == 2 * a * e.label
        assert e.profile.total_mass() == 1
    entry = dict((e.label, e) for e in s.entries)[17]
    assert entry.profile.pieces == ((systems.square_I(2), 16),)


def test_complement_value_tends_to_three_elevenths():
    eta = [systems.build_main_example(F(1, 20), n).meta["eta0"] for n in (2, 4, 8)]
    assert eta[0] < eta[1] < eta[2] < F(3, 11)
    assert eta[2] == F(3) / (11 + F(1, 4**8))


def test_fail_uce_entries():
    s = systems.build_fail_uce(2, 1, 5)
    assert [e.label for e in s.entries] == [1, 2, 3, 4, 5]
    e3 = s.entries[2]
    assert e3.profile.value_at((0, 0)) == F(1, 8)
    assert lat.covolume(e3.subgroup) == 1
    assert systems.build_fail_uce(2, 1, 0).entries == ()


def test_fail_uce_lic_tail_dominates_terms():
    s = systems.build_fail_uce(2, 1, 12)
    t = s.tail("lic")
    for pos, e in enumerate(s.entries, start=1):
        assert cond.lic_term(e.subgroup, e.profile, s.working_box).value <= t.term_bound(pos)


def test_fail_uce_closed_form_value():
    import math

    assert systems.fail_uce_lic_closed_form(2, 1) == pytest.approx(100 + 16 * math.log(2), rel=1e-12)


def test_wavelet_builder():
    s = systems.dyadic_wavelet(3)
    assert [e.label for e in s.entries] == list(range(-3, 4))
    base = [e for e in s.entries if e.label == 0][0]
    assert lat.covolume(base.subgroup) == 1
    first = [e for e in s.entries if e.label == 1][0]
    assert lat.covolume(first.subgroup) == F(1, 2)


def test_wavelet_2d_covolume():
    psi2 = prof.make_profile([(geo.Box((1, 1), (2, 2)), 1)])
    s = systems.build_wavelet_system(((2, 0), (0, 2)), lat.make_subgroup(((1, 0), (0, 1)), 2), psi2, [0, 1])
    assert lat.covolume(s.entries[1].subgroup) == F(1, 4)


def test_compact_open_counts():
    assert systems.compact_open_counts(1) == (1, 1, 1)
    assert systems.compact_open_counts(7) == (7, 1, F(1, 7))
    with pytest.raises(systems.ParameterError):
        systems.compact_open_counts(0)


def test_supin_table_small():
    rows = systems.supin_table(F(1, 20), 3, grid=6)
    assert sum(r["violations"] for r in rows) == 0
    assert {r["n"] for r in rows} == {0, 1, 2, 3}


def test_literal_matrix_breaks_corner_bound():
    rows = systems.supin_table(F(1, 20), 3, grid=6, literal=True)
    assert sum(r["violations"] for r in rows) > 0


@pytest.mark.parametrize("name", ["wavelet", "compact-open"])
def test_verification_tables_pass(name):
    rows = systems.verification_table(name)
    assert rows and all(r["passed"] for r in rows)


def test_build_example_by_name():
    assert systems.build_example("fail-uce", j_max=3).name == "fail_uce"
    with pytest.raises(systems.ParameterError):
        systems.build_example("compact-open")
