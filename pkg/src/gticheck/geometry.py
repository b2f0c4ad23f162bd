"""Exact convex geometry in dimensions 1-3: boxes, halfspace polytopes, volumes.

Boxes are closed.  Polytopes are stored both as halfspaces ``<n, x> <= c`` and
as their vertex set; everything is exact over ``Fraction`` and falls back to
tolerance comparisons when floats are present.  Balls exist only as counting
regions (membership tests), never as integration domains.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import linalg
from .scalar import EPS_GEOM, Scalar, eq, is_exact, is_zero, le, lt, to_scalar

MAX_POLY_DIM = 3


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class UnboundedRegionError(GeometryError):
    pass


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(to_scalar(v) for v in self.lo)
        hi = tuple(to_scalar(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise DimensionMismatch("box bounds must have equal, non-zero length")
        if any(lt(h, l) for l, h in zip(lo, hi)):
            raise GeometryError(f"box with lo > hi: {lo} {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def volume(self) -> Scalar:
        out = Fraction(1)
        for l, h in zip(self.lo, self.hi):
            out *= h - l
        return out

    def contains(self, x: Sequence) -> bool:
        return all(le(l, v) and le(v, h) for l, v, h in zip(self.lo, x, self.hi))

    def shift(self, v: Sequence) -> "Box":
        return Box(tuple(l + s for l, s in zip(self.lo, v)), tuple(h + s for h, s in zip(self.hi, v)))

    def halfspaces(self) -> tuple:
        d = self.dim
        out = []
        for i in range(d):
            e = tuple(Fraction(int(i == k)) for k in range(d))
            out.append((e, self.hi[i]))
            out.append((tuple(-x for x in e), -self.lo[i]))
        return tuple(out)

    def corners(self) -> list[tuple]:
        return [tuple(c) for c in itertools.product(*zip(self.lo, self.hi))]

    def is_subset(self, other: "Box") -> bool:
        return all(le(ol, l) and le(h, oh) for l, h, ol, oh in zip(self.lo, self.hi, other.lo, other.hi))


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: Scalar

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(to_scalar(v) for v in self.center))
        r = to_scalar(self.radius)
        if not lt(0, r):
            raise GeometryError("ball radius must be positive")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, x: Sequence) -> bool:
        d2 = sum(((a - c) ** 2 for a, c in zip(x, self.center)), Fraction(0))
        return le(d2, self.radius ** 2)

    def shift(self, v: Sequence) -> "Ball":
        return Ball(tuple(c + s for c, s in zip(self.center, v)), self.radius)


@dataclass(frozen=True)
class ConvexPolytope:
    """Bounded convex body ``{x : <n, x> <= c for all (n, c)}``.

    Build through :func:`make_polytope`, which computes and caches vertices and
    rejects unbounded input.
    """

    halfspaces: tuple
    vertices: tuple = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.halfspaces[0][0])

    def contains(self, x: Sequence) -> bool:
        return all(le(linalg.dot(n, x), c) for n, c in self.halfspaces)

    def shift(self, v: Sequence) -> "ConvexPolytope":
        hs = tuple((n, c + linalg.dot(n, v)) for n, c in self.halfspaces)
        verts = tuple(tuple(a + s for a, s in zip(p, v)) for p in self.vertices)
        return ConvexPolytope(hs, verts)

    def volume(self) -> Scalar:
        return volume(self)


@dataclass(frozen=True)
class RegionUnion:
    parts: tuple

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    def contains(self, x: Sequence) -> bool:
        return any(p.contains(x) for p in self.parts)

    def shift(self, v: Sequence) -> "RegionUnion":
        return RegionUnion(tuple(p.shift(v) for p in self.parts))


Region = Union[Box, Ball, ConvexPolytope, RegionUnion]
Body = Union[Box, ConvexPolytope]


def _normalise_halfspace(n, c):
    n = tuple(to_scalar(v) for v in n)
    c = to_scalar(c)
    if all(is_zero(v) for v in n):
        raise GeometryError("halfspace with zero normal")
    return n, c


def _plane_key(n, c):
    if is_exact(*n, c):
        s = next(abs(v) for v in n if v != 0)
        return tuple(v / s for v in n) + (c / s,)
    s = max(abs(v) for v in n)
    return tuple(round(v / s, 7) for v in n) + (round(c / s, 7),)


def _dedupe_points(points):
    if is_exact(*[x for p in points for x in p]):
        return sorted(set(points))
    out = []
    for p in points:
        if not any(all(abs(a - b) <= 1e3 * EPS_GEOM for a, b in zip(p, q)) for q in out):
            out.append(p)
    return sorted(out)


def _vertices(halfspaces, d):
    verts = []
    for combo in itertools.combinations(halfspaces, d):
        a = tuple(n for n, _ in combo)
        b = tuple(c for _, c in combo)
        try:
            x = linalg.solve(a, b)
        except linalg.SingularMatrixError:
            continue
        if all(le(linalg.dot(n, x), c) for n, c in halfspaces):
            verts.append(tuple(x))
    return _dedupe_points(verts)


def _is_bounded(halfspaces, d):
    # recession cone {x : <n, x> <= 0} is trivial iff its intersection with the
    # unit cube has no vertex besides the origin
    cone = [(n, Fraction(0)) for n, _ in halfspaces]
    for i in range(d):
        e = tuple(Fraction(int(i == k)) for k in range(d))
        cone.append((e, Fraction(1)))
        cone.append((tuple(-x for x in e), Fraction(1)))
    return all(all(is_zero(v) for v in p) for p in _vertices(cone, d))


def _on_plane(n, c, p):
    return eq(linalg.dot(n, p), c)


def make_polytope(halfspaces: Sequence) -> Optional[ConvexPolytope]:
    """Polytope from halfspaces ``(normal, offset)``; ``None`` when empty."""
    hs = [_normalise_halfspace(n, c) for n, c in halfspaces]
    if not hs:
        raise UnboundedRegionError("no halfspaces given")
    d = len(hs[0][0])
    if any(len(n) != d for n, _ in hs):
        raise DimensionMismatch("halfspace normals of different length")
    if d > MAX_POLY_DIM:
        raise GeometryError(f"polytopes are supported up to dimension {MAX_POLY_DIM}")
    seen, unique = set(), []
    for n, c in hs:
        key = _plane_key(n, c)
        if key not in seen:
            seen.add(key)
            unique.append((n, c))
    if not _is_bounded(unique, d):
        raise UnboundedRegionError("halfspaces describe an unbounded set")
    verts = _vertices(unique, d)
    if not verts:
        return None
    # keep facet-defining halfspaces only when the body is full-dimensional
    if _affine_rank(verts) == d:
        facets = [(n, c) for n, c in unique if sum(_on_plane(n, c, p) for p in verts) >= d]
        unique = facets or unique
    return ConvexPolytope(tuple(unique), tuple(verts))


def _affine_rank(points) -> int:
    if len(points) < 2:
        return 0
    p0 = points[0]
    rows = tuple(tuple(a - b for a, b in zip(p, p0)) for p in points[1:])
    return linalg.rank(rows)


def as_polytope(body: Body) -> ConvexPolytope:
    if isinstance(body, ConvexPolytope):
        return body
    if isinstance(body, Box):
        if body.dim > MAX_POLY_DIM:
            raise GeometryError(f"polytopes are supported up to dimension {MAX_POLY_DIM}")
        return ConvexPolytope(body.halfspaces(), tuple(_dedupe_points(body.corners())))
    raise GeometryError(f"cannot convert {type(body).__name__} to a polytope")


def intersect_boxes(a: Box, b: Box) -> Optional[Box]:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim}")
    lo = tuple(max(x, y) for x, y in zip(a.lo, b.lo))
    hi = tuple(min(x, y) for x, y in zip(a.hi, b.hi))
    if any(lt(h, l) for l, h in zip(lo, hi)):
        return None
    return Box(lo, tuple(max(l, h) for l, h in zip(lo, hi)))


def clip_polytope(p: Body, halfspace) -> Optional[ConvexPolytope]:
    """Intersect ``p`` with one halfspace ``(normal, offset)``."""
    poly = as_polytope(p)
    n, c = _normalise_halfspace(*halfspace)
    if len(n) != poly.dim:
        raise DimensionMismatch(f"halfspace of dimension {len(n)} for a {poly.dim}-polytope")
    if all(le(linalg.dot(n, v), c) for v in poly.vertices):
        return poly
    return make_polytope(poly.halfspaces + ((n, c),))


def intersect(a: Body, b: Body) -> Optional[Body]:
    """Intersection of two bodies; boxes stay boxes."""
    if isinstance(a, Box) and isinstance(b, Box):
        return intersect_boxes(a, b)
    pa, pb = as_polytope(a), as_polytope(b)
    if pa.dim != pb.dim:
        raise DimensionMismatch(f"dimensions {pa.dim} and {pb.dim}")
    return make_polytope(pa.halfspaces + pb.halfspaces)


def _angle_cmp(ref, normal):
    def half(u):
        cr = _cross_sign(ref, u, normal)
        if cr > 0 or (cr == 0 and linalg.dot(ref, u) > 0):
            return 0
        return 1

    def cmp(u, w):
        hu, hw = half(u), half(w)
        if hu != hw:
            return hu - hw
        s = _cross_sign(u, w, normal)
        return -1 if s > 0 else (1 if s < 0 else 0)

    return cmp


def _cross(u, w):
    if len(u) == 2:
        return u[0] * w[1] - u[1] * w[0]
    return (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])


def _cross_sign(u, w, normal):
    cr = _cross(u, w)
    val = cr if normal is None else linalg.dot(cr, normal)
    if is_exact(val):
        return (val > 0) - (val < 0)
    return 0 if abs(val) <= EPS_GEOM else (1 if val > 0 else -1)


def _order_around(points, normal=None):
    d = len(points[0])
    centre = tuple(sum((p[i] for p in points), Fraction(0)) / len(points) for i in range(d))
    rel = [tuple(a - b for a, b in zip(p, centre)) for p in points]
    ref = rel[0]
    order = sorted(range(len(points)), key=functools.cmp_to_key(lambda i, j: _angle_cmp(ref, normal)(rel[i], rel[j])))
    return [points[i] for i in order]


def volume(p: Body) -> Scalar:
    """Lebesgue volume; zero for lower-dimensional bodies."""
    if isinstance(p, Box):
        return p.volume()
    if not isinstance(p, ConvexPolytope):
        raise GeometryError(f"volume is only defined for boxes and polytopes, got {type(p).__name__}")
    d, verts = p.dim, list(p.vertices)
    if _affine_rank(verts) < d:
        return Fraction(0)
    if d == 1:
        xs = [v[0] for v in verts]
        return max(xs) - min(xs)
    if d == 2:
        ring = _order_around(verts)
        area = Fraction(0)
        for (x0, y0), (x1, y1) in zip(ring, ring[1:] + ring[:1]):
            area += x0 * y1 - x1 * y0
        return abs(area) / 2
    centre = tuple(sum((v[i] for v in verts), Fraction(0)) / len(verts) for i in range(3))
    total = Fraction(0)
    for n, c in p.halfspaces:
        face = [v for v in verts if _on_plane(n, c, v)]
        if len(face) < 3:
            continue
        ring = _order_around(face, n)
        p0 = ring[0]
        for p1, p2 in zip(ring[1:], ring[2:]):
            m = tuple(tuple(a - b for a, b in zip(q, centre)) for q in (p0, p1, p2))
            total += abs(linalg.det(m))
    return total / 6


def map_body(a, p: Body) -> Body:
    """Image ``{Ax : x in p}`` under an invertible matrix."""
    a = linalg.as_matrix(a)
    if linalg.shape(a) != (p.dim, p.dim):
        raise DimensionMismatch(f"{linalg.shape(a)} matrix on a {p.dim}-dimensional body")
    inv_t = linalg.transpose(linalg.inverse(a))
    if isinstance(p, Box) and linalg.is_diagonal(a):
        ends = [(a[i][i] * l, a[i][i] * h) for i, (l, h) in enumerate(zip(p.lo, p.hi))]
        return Box(tuple(min(e) for e in ends), tuple(max(e) for e in ends))
    poly = as_polytope(p)
    hs = tuple((linalg.matvec(inv_t, n), c) for n, c in poly.halfspaces)
    verts = tuple(_dedupe_points([linalg.matvec(a, v) for v in poly.vertices]))
    return ConvexPolytope(hs, verts)


def difference_set(v: Box) -> Box:
    """``V - V`` for a box."""
    return Box(tuple(l - h for l, h in zip(v.lo, v.hi)), tuple(h - l for l, h in zip(v.lo, v.hi)))


def bounding_box(region: Region) -> Box:
    if isinstance(region, Box):
        return region
    if isinstance(region, Ball):
        return Box(tuple(c - region.radius for c in region.center), tuple(c + region.radius for c in region.center))
    if isinstance(region, ConvexPolytope):
        verts = region.vertices
        d = region.dim
        return Box(tuple(min(v[i] for v in verts) for i in range(d)), tuple(max(v[i] for v in verts) for i in range(d)))
    if isinstance(region, RegionUnion):
        boxes = [bounding_box(p) for p in region.parts]
        d = boxes[0].dim
        return Box(tuple(min(b.lo[i] for b in boxes) for i in range(d)), tuple(max(b.hi[i] for b in boxes) for i in range(d)))
    raise UnboundedRegionError(f"no bounding box for {type(region).__name__}")
