"""Piecewise-constant energy densities on the Fourier domain.

A profile stores ``|g^|^2`` as a list of (body, value) pieces; overlapping
pieces add.  Bodies are boxes or convex polytopes, so every integral against a
box or polytope is an exact finite sum of volumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import geometry as geo
from . import linalg
from .scalar import Scalar, format_scalar, is_exact, lt, to_scalar


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class EnergyProfile:
    pieces: tuple = ()
    dim: Optional[int] = None

    def total_mass(self) -> Scalar:
        return sum((v * geo.volume(b) for b, v in self.pieces), Fraction(0))

    def support_box(self) -> Optional[geo.Box]:
        if not self.pieces:
            return None
        return geo.bounding_box(geo.RegionUnion(tuple(b for b, _ in self.pieces)))

    def value_at(self, x: Sequence) -> Scalar:
        return sum((v for b, v in self.pieces if b.contains(x)), Fraction(0))

    @property
    def exact(self) -> bool:
        return is_exact([v for _, v in self.pieces]) and all(_body_exact(b) for b, _ in self.pieces)


def _body_exact(b) -> bool:
    if isinstance(b, geo.Box):
        return is_exact(list(b.lo), list(b.hi))
    return is_exact([x for n, c in b.halfspaces for x in (*n, c)])


@dataclass(frozen=True)
class TailDescriptor:
    """Analytic control of the terms beyond a truncation.

    Terms are indexed by their 1-based position ``k`` in the system.  ``geometric``
    asserts ``term_k <= coefficient * ratio**k`` for every ``k``; ``user`` supplies
    the tail sum bound directly as a function of the truncation position.
    """

    kind: str = "none"
    ratio: Optional[Scalar] = None
    coefficient: Optional[Scalar] = None
    bound: Optional[Callable[[int], Scalar]] = field(default=None, compare=False)
    constant: Optional[Scalar] = None

    def __post_init__(self):
        if self.kind not in ("none", "geometric", "user"):
            raise ProfileError(f"unknown tail kind {self.kind!r}")
        if self.kind == "geometric":
            q = to_scalar(self.ratio)
            c = to_scalar(self.coefficient)
            if not (lt(0, q) and lt(q, 1)):
                raise ProfileError("geometric tail needs 0 < ratio < 1")
            if lt(c, 0):
                raise ProfileError("geometric tail coefficient must be nonnegative")
            object.__setattr__(self, "ratio", q)
            object.__setattr__(self, "coefficient", c)
        if self.kind == "user":
            if self.bound is None and self.constant is None:
                raise ProfileError("user tail needs a bound function or a constant")
            if self.constant is not None:
                object.__setattr__(self, "constant", to_scalar(self.constant))

    @property
    def present(self) -> bool:
        return self.kind != "none"

    def term_bound(self, k: int) -> Optional[Scalar]:
        if self.kind == "geometric":
            return self.coefficient * self.ratio**k
        return None

    def tail_bound(self, k_max: int) -> Optional[Scalar]:
        """Bound on the sum of all terms after position ``k_max``."""
        if self.kind == "geometric":
            q = self.ratio
            return self.coefficient * q ** (k_max + 1) / (1 - q)
        if self.kind == "user":
            return self.bound(k_max) if self.bound is not None else self.constant
        return None

    def to_dict(self) -> dict:
        if self.kind == "geometric":
            return {"kind": "geometric", "ratio": format_scalar(self.ratio), "coefficient": format_scalar(self.coefficient)}
        if self.kind == "user":
            if self.constant is None:
                raise ProfileError("a user tail given by a function cannot be serialised")
            return {"kind": "user", "bound": format_scalar(self.constant)}
        return {"kind": "none"}

    @classmethod
    def from_dict(cls, data: dict) -> "TailDescriptor":
        kind = data.get("kind", "none")
        if kind == "geometric":
            return cls("geometric", data["ratio"], data["coefficient"])
        if kind == "user":
            return cls("user", constant=data["bound"])
        if kind == "none":
            return cls()
        raise ProfileError(f"unknown tail kind {kind!r}")


NO_TAIL = TailDescriptor()


def make_profile(pieces: Sequence) -> EnergyProfile:
    """Validate ``(body, value)`` pieces; empty input gives the zero profile."""
    out = []
    dim = None
    for body, value in pieces:
        value = to_scalar(value)
        if lt(value, 0):
            raise ProfileError(f"negative profile value {value}")
        if not isinstance(body, (geo.Box, geo.ConvexPolytope)):
            raise ProfileError(f"profile pieces must be boxes or polytopes, got {type(body).__name__}")
        if body.dim > geo.MAX_POLY_DIM:
            raise ProfileError(f"profiles are limited to dimension {geo.MAX_POLY_DIM}")
        if dim is None:
            dim = body.dim
        elif body.dim != dim:
            raise geo.DimensionMismatch("profile pieces of different dimension")
        if value != 0:
            out.append((body, value))
    return EnergyProfile(tuple(out), dim)


def _overlap_volume(body, region) -> Scalar:
    if isinstance(body, geo.Box) and isinstance(region, geo.Box):
        inter = geo.intersect_boxes(body, region)
        return Fraction(0) if inter is None else inter.volume()
    inter = geo.intersect(body, region)
    return Fraction(0) if inter is None else geo.volume(inter)


def integrate(p: EnergyProfile, region) -> Scalar:
    """``sum value * volume(piece ∩ region)``."""
    if not isinstance(region, (geo.Box, geo.ConvexPolytope)):
        raise geo.UnboundedRegionError("integration is only over boxes and polytopes")
    if p.dim is not None and region.dim != p.dim:
        raise geo.DimensionMismatch(f"{region.dim}-dimensional region for a {p.dim}-dimensional profile")
    total = Fraction(0)
    for body, value in p.pieces:
        total += value * _overlap_volume(body, region)
    return total


def dilate_profile(p: EnergyProfile, a, j: int) -> EnergyProfile:
    """``|det A|^{-j} p((A^T)^{-j} w)``: pieces move by ``(A^T)^j``."""
    a = linalg.as_matrix(a)
    if j == 0 or not p.pieces:
        return p
    det = linalg.det(a)
    if det == 0:
        raise linalg.SingularMatrixError("dilation matrix is singular")
    m = linalg.mat_pow(linalg.transpose(a), j)
    factor = abs(det) ** (-j)
    return EnergyProfile(tuple((geo.map_body(m, b), v * factor) for b, v in p.pieces), p.dim)


def aggregate(profiles: Sequence[EnergyProfile] = (), closed_form: Optional[EnergyProfile] = None, infinite: bool = False) -> EnergyProfile:
    """Density summed over the generator index set.

    A finite index set sums its profiles piecewise.  An infinite index set is
    accepted only through a supplied ``closed_form`` aggregate.
    """
    if closed_form is not None:
        return closed_form
    if infinite:
        raise ProfileError("an infinite index set needs a closed-form aggregate")
    pieces = [piece for prof in profiles for piece in prof.pieces]
    return make_profile(pieces)


def profile_to_dict(p: EnergyProfile) -> list:
    return [body_to_dict(b) | {"value": format_scalar(v)} for b, v in p.pieces]


def body_to_dict(b) -> dict:
    if isinstance(b, geo.Box):
        return {"box": {"lo": [format_scalar(x) for x in b.lo], "hi": [format_scalar(x) for x in b.hi]}}
    return {"polytope": [{"normal": [format_scalar(x) for x in n], "offset": format_scalar(c)} for n, c in b.halfspaces]}


def body_from_dict(data: dict):
    if "box" in data:
        return geo.Box(tuple(data["box"]["lo"]), tuple(data["box"]["hi"]))
    if "polytope" in data:
        poly = geo.make_polytope([(h["normal"], h["offset"]) for h in data["polytope"]])
        if poly is None:
            raise ProfileError("empty polytope in profile")
        return poly
    raise ProfileError("profile piece needs a 'box' or 'polytope' key")


def profile_from_dict(items: list) -> EnergyProfile:
    return make_profile([(body_from_dict(item), item["value"]) for item in items])
