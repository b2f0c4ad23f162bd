"""Expanding / expanding-on-a-subspace classification and singular-value ratios.

Rational matrices are classified exactly: the characteristic polynomial is
factored over Q, each irreducible factor's exponent in the minimal polynomial
is read off from kernel dimensions of ``f(A)^e``, and roots are placed inside,
on, or outside the unit circle without any modulus tolerance.  Matrices with
float entries use numpy eigenvalues and are flagged ``tolerance-based``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import sympy

from . import linalg
from .scalar import format_scalar, is_exact

EPS_SPEC = 1e-8
_CLUSTER_TOL = 1e-6


class Classification(str, enum.Enum):
    EXPANDING = "Expanding"
    EXPANDING_ON_SUBSPACE_ONLY = "ExpandingOnSubspaceOnly"
    NOT_EXPANDING_ON_SUBSPACE = "NotExpandingOnSubspace"


@dataclass
class FactorInfo:
    polynomial: str
    degree: int
    multiplicity: int  # in the characteristic polynomial
    min_poly_exponent: int
    inside: int  # roots with |z| < 1, counted once per factor
    on_circle: int
    outside: int

    @property
    def unit_circle(self) -> bool:
        return self.on_circle > 0


@dataclass
class SpectralReport:
    eigenvalues: list  # (complex value, algebraic multiplicity)
    factors: list = field(default_factory=list)
    classification: Classification = Classification.NOT_EXPANDING_ON_SUBSPACE
    certainty: str = "exact"
    conditions: dict = field(default_factory=dict)
    near_unit_circle: bool = False

    @property
    def unit_factors(self) -> list:
        return [f for f in self.factors if f.unit_circle]

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [
                {"re": float(np.real(v)), "im": float(np.imag(v)), "multiplicity": m} for v, m in self.eigenvalues
            ],
            "factors": [
                {
                    "polynomial": f.polynomial,
                    "degree": f.degree,
                    "multiplicity": f.multiplicity,
                    "min_poly_exponent": f.min_poly_exponent,
                    "inside": f.inside,
                    "on_circle": f.on_circle,
                    "outside": f.outside,
                }
                for f in self.factors
            ],
            "unit_circle_factors": [f.polynomial for f in self.unit_factors],
            "classification": self.classification.value,
            "certainty": self.certainty,
            "conditions": dict(self.conditions),
            "near_unit_circle": self.near_unit_circle,
        }

    def render(self) -> str:
        lines = [f"classification: {self.classification.value} ({self.certainty})"]
        for key in ("a", "b", "c"):
            if key in self.conditions:
                lines.append(f"  condition ({key}): {'holds' if self.conditions[key] else 'fails'}")
        lines.append("eigenvalues:")
        for v, m in self.eigenvalues:
            v = complex(v)
            lines.append(f"  {v.real:+.10g}{v.imag:+.10g}i  |.|={abs(v):.10g}  mult {m}")
        if self.factors:
            lines.append("characteristic polynomial factors:")
            for f in self.factors:
                lines.append(
                    f"  ({f.polynomial})^{f.multiplicity}  min-poly exponent {f.min_poly_exponent}"
                    f"  roots in/on/out {f.inside}/{f.on_circle}/{f.outside}"
                )
        return "\n".join(lines)


def _check_invertible(a):
    n, k = linalg.shape(a)
    if n != k:
        raise ValueError("matrix must be square")
    d = linalg.det(a)
    if d == 0 or (not is_exact(a) and abs(d) <= 1e-12):
        raise linalg.SingularMatrixError("matrix is singular")


def _sym(a):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in a])


def _poly_at_matrix(poly: sympy.Poly, m: sympy.Matrix) -> sympy.Matrix:
    out = sympy.zeros(m.rows, m.cols)
    for c in poly.all_coeffs():
        out = out * m + c * sympy.eye(m.rows)
    return out


def _min_poly_exponent(poly, m, mult) -> int:
    deg = poly.degree()
    base = _poly_at_matrix(poly, m)
    power = sympy.eye(m.rows)
    for e in range(1, mult + 1):
        power = power * base
        if m.rows - power.rank() == deg * mult:
            return e
    return mult


def _is_self_reciprocal(poly: sympy.Poly) -> bool:
    c = poly.all_coeffs()
    r = list(reversed(c))
    return c == r or c == [-x for x in r]


def _dickson_count(poly: sympy.Poly) -> int:
    """Unit-circle roots of an irreducible palindromic polynomial of even degree."""
    y = sympy.Symbol("y")
    c = poly.all_coeffs()
    m = len(c) // 2
    d_prev, d_cur = sympy.Integer(2), y
    g = c[m]
    for k in range(1, m + 1):
        g += c[m + k] * d_cur
        d_prev, d_cur = d_cur, sympy.expand(y * d_cur - d_prev)
    gp = sympy.Poly(sympy.expand(g), y)
    return 2 * int(gp.count_roots(-2, 2))


def _modulus_sides(poly: sympy.Poly) -> tuple[int, int]:
    """(inside, outside) root counts of a polynomial without unit-circle roots."""
    eps = sympy.Rational(1, 16)
    while True:
        real, cplx = poly.intervals(all=True, eps=eps)
        inside = outside = 0
        undecided = False
        for (lo, hi), mult in real:
            if max(abs(lo), abs(hi)) < 1:
                inside += mult
            elif lo * hi > 0 and min(abs(lo), abs(hi)) > 1:
                outside += mult
            else:
                undecided = True
        for (sw, ne), mult in cplx:
            x0, y0 = sympy.re(sw), sympy.im(sw)
            x1, y1 = sympy.re(ne), sympy.im(ne)
            nx = 0 if x0 <= 0 <= x1 else min(abs(x0), abs(x1))
            ny = 0 if y0 <= 0 <= y1 else min(abs(y0), abs(y1))
            far = max(x0 * x0, x1 * x1) + max(y0 * y0, y1 * y1)
            if far < 1:
                inside += mult
            elif nx * nx + ny * ny > 1:
                outside += mult
            else:
                undecided = True
        if not undecided:
            return inside, outside
        eps = eps / 16


def _factor_info(poly: sympy.Poly, mult: int, m: sympy.Matrix) -> FactorInfo:
    deg = poly.degree()
    exponent = _min_poly_exponent(poly, m, mult)
    if deg == 1:
        a, b = poly.all_coeffs()
        root = -b / a
        on = int(bool(abs(root) == 1))
        inside = int(bool(abs(root) < 1))
        outside = 1 - on - inside
    elif _is_self_reciprocal(poly):
        on = _dickson_count(poly)
        inside = outside = (deg - on) // 2
    else:
        on = 0
        inside, outside = _modulus_sides(poly)
    return FactorInfo(str(poly.as_expr()), deg, mult, exponent, inside, on, outside)


def _classify_exact(a) -> SpectralReport:
    m = _sym(a)
    x = sympy.Symbol("x")
    cp = m.charpoly(x)
    _, factors = sympy.factor_list(cp.as_expr(), x)
    infos = []
    eigen = []
    for f, mult in factors:
        poly = sympy.Poly(f, x, domain="QQ").monic()
        infos.append(_factor_info(poly, int(mult), m))
        for r in poly.nroots(n=30):
            eigen.append((complex(r), int(mult)))
    infos.sort(key=lambda f: (f.degree, f.polynomial))
    eigen.sort(key=lambda p: (abs(p[0]), p[0].real, p[0].imag))
    cond_a = all(f.inside == 0 for f in infos)
    cond_b = any(f.outside > 0 for f in infos)
    cond_c = all(f.min_poly_exponent == 1 for f in infos if f.unit_circle)
    return _finish(eigen, infos, cond_a, cond_b, cond_c, "exact", False)


def _finish(eigen, infos, cond_a, cond_b, cond_c, certainty, near):
    if cond_a and cond_b and cond_c and all(f.on_circle == 0 for f in infos) and (infos or eigen):
        cls = Classification.EXPANDING
    elif cond_a and cond_b and cond_c:
        cls = Classification.EXPANDING_ON_SUBSPACE_ONLY
    else:
        cls = Classification.NOT_EXPANDING_ON_SUBSPACE
    return SpectralReport(eigen, infos, cls, certainty, {"a": cond_a, "b": cond_b, "c": cond_c}, near)


def _classify_float(a) -> SpectralReport:
    arr = np.array(linalg.to_float(a))
    n = arr.shape[0]
    vals = np.linalg.eigvals(arr)
    clusters: list[list[complex]] = []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(v - np.mean(c)) <= _CLUSTER_TOL * max(1.0, abs(v)):
                c.append(v)
                break
        else:
            clusters.append([v])
    scale = max(1.0, np.linalg.norm(arr, 2))
    eigen, infos = [], []
    cond_a, cond_b, cond_c = True, False, True
    near = False
    for c in clusters:
        lam = complex(np.mean(c))
        mult = len(c)
        mod = abs(lam)
        on = abs(mod - 1) <= EPS_SPEC
        near = near or abs(mod - 1) <= 10 * EPS_SPEC
        if on:
            sv = np.linalg.svd(arr - lam * np.eye(n), compute_uv=False)
            geometric = int(np.sum(sv <= _CLUSTER_TOL * scale))
            if geometric < mult:
                cond_c = False
        elif mod < 1:
            cond_a = False
        else:
            cond_b = True
        eigen.append((lam, mult))
    eigen.sort(key=lambda p: (abs(p[0]), p[0].real, p[0].imag))
    report = _finish(eigen, infos, cond_a, cond_b, cond_c, "tolerance-based", near)
    if report.classification is Classification.EXPANDING and any(abs(abs(l) - 1) <= EPS_SPEC for l, _ in eigen):
        report.classification = Classification.EXPANDING_ON_SUBSPACE_ONLY
    return report


def classify_expanding(a) -> SpectralReport:
    """Classify ``a`` as expanding, expanding on a subspace only, or neither."""
    a = linalg.as_matrix(a)
    _check_invertible(a)
    if is_exact(a):
        return _classify_exact(a)
    return _classify_float(a)


def singular_ratio(c) -> float:
    """``sigma_max / sigma_min`` (float)."""
    c = linalg.as_matrix(c)
    _check_invertible(c)
    sv = np.linalg.svd(np.array(linalg.to_float(c)), compute_uv=False)
    return float(sv[0] / sv[-1])


@dataclass
class SingularGuarantee:
    holds: bool
    bound: float
    max_ratio: float
    ratios: list

    def to_dict(self) -> dict:
        return {"holds": self.holds, "bound": self.bound, "max_ratio": self.max_ratio, "ratios": self.ratios}


def uce_guarantee_by_singular(family: Sequence, bound) -> SingularGuarantee:
    """True iff every singular ratio in ``family`` is at most ``bound``."""
    ratios = [singular_ratio(c) for c in family]
    b = float(bound)
    top = max(ratios, default=1.0)
    return SingularGuarantee(top <= b * (1 + 1e-9), b, top, ratios)


def guo_matrix(a=2) -> tuple:
    """``diag(a, J)`` with ``J`` the 2x2 unipotent Jordan block."""
    return linalg.as_matrix([[a, 0, 0], [0, 1, 1], [0, 0, 1]])


def remark_matrix(a) -> tuple:
    """``diag(2, U)`` with ``U = [[1+a, 1], [-a^2, 1-a]]`` (det 2, ``(x-1)^2`` on the block)."""
    a = linalg.as_vector([a])[0]
    return linalg.as_matrix([[2, 0, 0], [0, 1 + a, 1], [0, -a * a, 1 - a]])


def describe_matrix(a) -> list[list[str]]:
    return [[format_scalar(x) for x in row] for row in linalg.as_matrix(a)]


__all__ = [
    "Classification",
    "FactorInfo",
    "SpectralReport",
    "SingularGuarantee",
    "classify_expanding",
    "singular_ratio",
    "uce_guarantee_by_singular",
    "guo_matrix",
    "remark_matrix",
    "EPS_SPEC",
]
