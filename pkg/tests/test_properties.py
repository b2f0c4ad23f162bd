from fractions import Fraction as F

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gticheck import document as docmod
from gticheck import geometry as geo
from gticheck import lattice as lat
from gticheck import linalg
from gticheck import profiles as prof
from gticheck import spectral

small = st.fractions(min_value=-3, max_value=3, max_denominator=6)
nonzero_int = st.integers(-4, 4).filter(bool)


@st.composite
def invertible(draw, d):
    m = draw(st.lists(st.lists(small, min_size=d, max_size=d), min_size=d, max_size=d))
    assume(linalg.det(m) != 0)
    return linalg.as_matrix(m)


@st.composite
def unimodular(draw, d):
    u = linalg.identity(d)
    for _ in range(draw(st.integers(1, 4))):
        i, k = draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1))
        if i == k:
            continue
        c = draw(st.integers(-2, 2))
        e = [list(r) for r in linalg.identity(d)]
        e[i][k] = F(c)
        u = linalg.matmul(u, linalg.as_matrix(e))
    return u


@st.composite
def boxes(draw, d):
    lo = [draw(small) for _ in range(d)]
    width = [draw(st.fractions(min_value=F(1, 4), max_value=3, max_denominator=4)) for _ in range(d)]
    return geo.Box(tuple(lo), tuple(l + w for l, w in zip(lo, width)))


@st.composite
def triangles(draw):
    # a box clipped by one oblique halfspace through its centre
    b = draw(boxes(2))
    n = (draw(nonzero_int), draw(nonzero_int))
    c = sum(ni * (l + h) / 2 for ni, l, h in zip(n, b.lo, b.hi))
    return geo.clip_polytope(b, (n, c))


@settings(max_examples=60, deadline=None)
@given(triangles(), st.tuples(nonzero_int, st.integers(-4, 4)), small)
def test_volume_additivity(p, n, c):
    inside = geo.clip_polytope(p, (n, c))
    outside = geo.clip_polytope(p, (tuple(-x for x in n), -c))
    parts = sum(geo.volume(q) for q in (inside, outside) if q is not None)
    assert parts == geo.volume(p)


@settings(max_examples=60, deadline=None)
@given(triangles(), invertible(2))
def test_determinant_law(p, a):
    assert geo.volume(geo.map_body(a, p)) == abs(linalg.det(a)) * geo.volume(p)


fraction01 = st.fractions(min_value=0, max_value=1, max_denominator=8)


@settings(max_examples=40, deadline=None)
@given(invertible(2), boxes(2), st.lists(fraction01, min_size=4, max_size=4))
def test_count_monotone(b, outer, t):
    L = lat.PointLattice(b)
    lo, hi = [], []
    for i in range(2):
        a, c = sorted(t[2 * i : 2 * i + 2])
        w = outer.hi[i] - outer.lo[i]
        lo.append(outer.lo[i] + a * w)
        hi.append(outer.lo[i] + c * w)
    inner = geo.Box(tuple(lo), tuple(hi))
    assert lat.count_in_translate(L, inner) <= lat.count_in_translate(L, outer)


@settings(max_examples=40, deadline=None)
@given(invertible(2), boxes(2), st.tuples(small, small), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_translation_covariance(b, box, w, m):
    L = lat.PointLattice(b)
    shift = tuple(x + y for x, y in zip(w, L.point(m)))
    assert lat.count_in_translate(L, box, w) == lat.count_in_translate(L, box, shift)


@settings(max_examples=40, deadline=None)
@given(invertible(2), unimodular(2), boxes(2))
def test_count_basis_invariant(b, u, box):
    assert lat.count_in_translate(lat.PointLattice(b), box) == lat.count_in_translate(lat.PointLattice(linalg.matmul(b, u)), box)


@settings(max_examples=40, deadline=None)
@given(invertible(3))
def test_covolume_duality(c):
    g = lat.make_subgroup(c, 3)
    dual = lat.annihilator(g)
    assert lat.covolume(g) * abs(linalg.det(dual.basis)) == 1
    back = lat.annihilator(lat.make_subgroup(dual.basis, 3))
    assert lat.canonical_basis(back) == lat.canonical_basis(lat.PointLattice(c))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([((2, 0), (0, 2)), ((1, 0), (0, 2)), ((1, 1), (0, 1)), ((3, 1), (0, F(1, 2)))]), invertible(2))
def test_similarity_invariance(a, s):
    sa = linalg.matmul(linalg.matmul(s, a), linalg.inverse(s))
    assert spectral.classify_expanding(sa).classification is spectral.classify_expanding(a).classification


@settings(max_examples=40, deadline=None)
@given(boxes(2), st.sampled_from([((2, 0), (0, 3)), ((1, 1), (0, 2)), ((0, 1), (2, 0))]), st.integers(-2, 2), st.integers(-2, 2))
def test_dilation_composition(box, a, j, k):
    p = prof.make_profile([(box, 1)])
    two_step = prof.dilate_profile(prof.dilate_profile(p, a, j), a, k)
    one_step = prof.dilate_profile(p, a, j + k)
    assert two_step.total_mass() == one_step.total_mass() == p.total_mass()
    for (b1, v1), (b2, v2) in zip(two_step.pieces, one_step.pieces):
        assert v1 == v2
        assert geo.volume(b1) == geo.volume(b2)
        assert geo.bounding_box(b1) == geo.bounding_box(b2)


@settings(max_examples=30, deadline=None)
@given(invertible(2), st.lists(boxes(2), min_size=1, max_size=3))
def test_document_round_trip(c, tests):
    doc = docmod.SystemDocument(2, subgroup=lat.make_subgroup(c, 2), test_sets=tuple(tests), parameters={"grid": 4})
    again = docmod.loads(doc.dumps())
    assert again == doc
