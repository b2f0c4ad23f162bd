"""Co-compact subgroups of R^d, annihilators, and exact lattice-point counting.

Counting works on the integer coordinates ``m`` of a point ``Bm``.  A region
(box or polytope) becomes a linear system ``G m <= c - N w`` in ``m`` for a
translation ``w``; a ball becomes a quadratic inequality.  Linear systems are
projected onto leading coordinates by Fourier-Motzkin elimination so every
enumerated prefix has a non-empty real fibre, and the last coordinate of each
fibre is solved as an interval instead of being enumerated.  Rational systems
are scaled to integers and evaluated with numpy (int64, or Python ints when
int64 could overflow), so counts are exact.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import geometry as geo
from . import linalg
from .scalar import EPS_GEOM, Scalar, format_scalar, is_exact, to_scalar

MAX_CANDIDATES = 10**8
MAX_SAMPLES = 2_000_000
MAX_DIM = 8
_FM_MAX_DIM = 3
_FM_MAX_ROWS = 4000
_CHUNK = 2_000_000


class LatticeError(ValueError):
    pass


class EnumerationCapExceeded(LatticeError):
    pass


@dataclass(frozen=True)
class PointLattice:
    """Discrete set ``B Z^k`` in R^d; ``weight`` is the counting-measure weight."""

    basis: tuple
    weight: Scalar = Fraction(1)

    def __post_init__(self):
        b = linalg.as_matrix(self.basis)
        d, k = linalg.shape(b)
        if d > MAX_DIM:
            raise LatticeError(f"counting supports d <= {MAX_DIM}, got {d}")
        if linalg.rank(b) != k:
            raise LatticeError("lattice basis columns are linearly dependent")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "weight", to_scalar(self.weight))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        return len(self.basis[0])

    @property
    def exact(self) -> bool:
        return is_exact(self.basis)

    def point(self, m: Sequence[int]) -> tuple:
        return linalg.matvec(self.basis, [Fraction(int(x)) for x in m])

    def covolume(self) -> Scalar:
        """Volume of a fundamental cell in the span of the basis."""
        gram = linalg.matmul(linalg.transpose(self.basis), self.basis)
        g = linalg.det(gram)
        return _sqrt_scalar(g)


@dataclass(frozen=True)
class CoCompactSubgroup:
    """``C (Z^n x R^{d-n})`` for an invertible matrix ``C``."""

    C: tuple
    n: int

    def __post_init__(self):
        c = linalg.as_matrix(self.C)
        d, k = linalg.shape(c)
        if d != k:
            raise LatticeError("subgroup matrix must be square")
        if not 0 <= self.n <= d:
            raise LatticeError(f"split rank n={self.n} outside [0, {d}]")
        if linalg.det(c) == 0 or (not is_exact(c) and abs(linalg.det(c)) <= EPS_GEOM):
            raise linalg.SingularMatrixError("subgroup matrix is singular")
        object.__setattr__(self, "C", c)

    @property
    def dim(self) -> int:
        return len(self.C)

    def lattice_part(self) -> PointLattice:
        """The discrete part ``C (Z^n x {0})``."""
        if self.n == 0:
            raise LatticeError("subgroup has no discrete part (n = 0)")
        return PointLattice(tuple(row[: self.n] for row in self.C))

    def to_dict(self) -> dict:
        return {"C": [[format_scalar(x) for x in row] for row in self.C], "n": self.n}


@dataclass
class CountProfile:
    counts: list = field(default_factory=list)  # (label, int)
    ratios: list = field(default_factory=list)

    def __post_init__(self):
        if any(c < 0 for _, c in self.counts):
            raise LatticeError("counts must be nonnegative")


def _sqrt_scalar(x: Scalar) -> Scalar:
    if is_exact(x):
        x = Fraction(x)
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
    return math.sqrt(float(x))


def make_subgroup(C, n: int) -> CoCompactSubgroup:
    return CoCompactSubgroup(C, int(n))


def covolume(g: CoCompactSubgroup) -> Scalar:
    return abs(linalg.det(g.C))


def annihilator(g: CoCompactSubgroup) -> PointLattice:
    """Dual lattice: first ``n`` columns of ``(C^T)^{-1}``, weight ``|det C|^{-1}``."""
    if g.n == 0:
        raise LatticeError("annihilator of R^d is {0}; nothing to enumerate")
    sharp = linalg.inverse(linalg.transpose(g.C))
    basis = tuple(row[: g.n] for row in sharp)
    return PointLattice(basis, 1 / covolume(g))


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def canonical_basis(L: PointLattice) -> tuple:
    """Hermite normal form of a full-rank rational lattice; equal iff same point set."""
    from sympy import Matrix
    from sympy.matrices.normalforms import hermite_normal_form

    if not L.exact:
        raise LatticeError("canonical basis needs a rational basis")
    if L.rank != L.dim:
        raise LatticeError("canonical basis is implemented for full-rank lattices")
    den = _lcm_den(x for row in L.basis for x in row)
    ints = Matrix([[int(x * den) for x in row] for row in L.basis])
    h = hermite_normal_form(ints)
    return tuple(tuple(Fraction(int(h[i, j]), den) for j in range(h.cols)) for i in range(h.rows))


def reduced(L: PointLattice) -> tuple[PointLattice, tuple]:
    """LLL-reduced copy of ``L`` together with the unimodular change of basis."""
    b, u = linalg.lll_reduce(L.basis)
    return PointLattice(b, L.weight), u


# ---------------------------------------------------------------------------
# counting engine


class _LinearSystem:
    """``G m <= c - N w`` with Fourier-Motzkin projections onto leading variables."""

    def __init__(self, G, c, N, exact):
        self.G, self.c, self.N, self.exact = G, c, N, exact
        self.k = len(G[0])
        self.m = len(G)
        ident = [[Fraction(int(i == j)) for j in range(self.m)] for i in range(self.m)]
        level = [(tuple(g), tuple(w)) for g, w in zip(G, ident)]
        self.levels = [None] * self.k
        self.levels[self.k - 1] = level
        if self.k <= _FM_MAX_DIM:
            for var in range(self.k - 1, 0, -1):
                level = _fm_eliminate(level, var, exact)
                if level is None or len(level) > _FM_MAX_ROWS:
                    break
                self.levels[var - 1] = level

    def evaluate(self, level, omegas):
        """Rows of a level as (coefficients, rhs per omega) arrays."""
        rows = self.levels[level]
        gs = [g[: level + 1] for g, _ in rows]
        wc = [linalg.dot(w, self.c) for _, w in rows]
        wn = [linalg.matvec(linalg.transpose(self.N), w) for _, w in rows]
        if not self.exact:
            G = np.array([[float(x) for x in g] for g in gs])
            om = np.array([[float(x) for x in o] for o in omegas])
            rhs = np.array([float(x) for x in wc])[:, None] - np.array([[float(x) for x in r] for r in wn]) @ om.T
            return G, rhs
        dom = _lcm_den(x for o in omegas for x in o)
        om_int = [[int(x * dom) for x in o] for o in omegas]
        g_int, wc_int, wn_int = [], [], []
        for g, a, n in zip(gs, wc, wn):
            scale = math.lcm(_lcm_den(g), Fraction(a).denominator, _lcm_den(Fraction(x) / dom for x in n))
            g_int.append([int(x * scale) for x in g])
            wc_int.append(int(a * scale))
            wn_int.append([int(Fraction(x) * scale / dom) for x in n])
        mag = max(abs(x) for o in om_int for x in o) if om_int else 0
        bound = max((abs(x) for r in wn_int for x in r), default=0) * mag * max(1, len(self.N[0]))
        bound += max((abs(x) for x in wc_int), default=0)
        big = bound >= 2**61 or max((abs(x) for r in g_int for x in r), default=0) >= 2**31
        dt = object if big else np.int64
        G = np.array(g_int, dtype=dt)
        rhs = np.array(wc_int, dtype=dt)[:, None] - np.array(wn_int, dtype=dt).reshape(len(wn_int), -1) @ np.array(om_int, dtype=dt).reshape(len(om_int), -1).T
        return G, rhs


def _fm_eliminate(rows, var, exact):
    pos, neg, out = [], [], []
    for g, w in rows:
        a = g[var]
        if (a > 0) if exact else (a > EPS_GEOM):
            pos.append((g, w))
        elif (a < 0) if exact else (a < -EPS_GEOM):
            neg.append((g, w))
        else:
            out.append((g[:var], w))
    for (gp, wp), (gn, wn) in itertools.product(pos, neg):
        ap, an = gp[var], -gn[var]
        g = tuple(an * x + ap * y for x, y in zip(gp[:var], gn[:var]))
        w = tuple(an * x + ap * y for x, y in zip(wp, wn))
        out.append((g, w))
    seen, uniq = set(), []
    for g, w in out:
        s = max([abs(x) for x in g] + [abs(x) for x in w])
        if s == 0:
            continue
        key = tuple(x / s for x in g) + tuple(x / s for x in w)
        if not exact:
            key = tuple(round(float(x), 9) for x in key)
        if key not in seen:
            seen.add(key)
            uniq.append((tuple(x / s for x in g), tuple(x / s for x in w)))
    return uniq


def _intervals(G, rhs, prefix, exact):
    """Interval of the next variable for every (omega, prefix) pair.

    ``G`` has one column per prefix variable plus one for the new variable.
    Returns ``lo, hi`` arrays of shape (S, T); empty fibres have ``lo > hi``.
    """
    S, T = rhs.shape[1], prefix.shape[0]
    nv = G.shape[1] - 1
    if nv:
        r = rhs[:, :, None] - (G[:, :nv] @ prefix.T)[:, None, :]
    else:
        r = np.broadcast_to(rhs[:, :, None], (rhs.shape[0], S, T))
    a = G[:, nv]
    big_lo = -(2**60)
    big_hi = 2**60
    lo = np.full((S, T), big_lo, dtype=object if r.dtype == object else np.int64)
    hi = np.full((S, T), big_hi, dtype=lo.dtype)
    for i in range(G.shape[0]):
        ai = a[i]
        ri = r[i]
        if exact:
            if ai > 0:
                hi = np.minimum(hi, ri // ai)
            elif ai < 0:
                lo = np.maximum(lo, -(ri // (-ai)))
            else:
                bad = ri < 0
                hi = np.where(bad, big_lo, hi)
        else:
            if ai > EPS_GEOM:
                hi = np.minimum(hi, np.floor(ri / ai + EPS_GEOM * (1 + np.abs(ri / ai))).astype(np.int64))
            elif ai < -EPS_GEOM:
                lo = np.maximum(lo, np.ceil(ri / ai - EPS_GEOM * (1 + np.abs(ri / ai))).astype(np.int64))
            else:
                hi = np.where(ri < -EPS_GEOM, big_lo, hi)
    return lo, hi


def _preimage_ranges(basis, box: geo.Box, omegas, exact):
    """Integer coordinate ranges covering every ``m`` with ``Bm in box - w``."""
    pinv = linalg.pseudo_inverse(basis)
    d = len(basis)
    wlo = [min(o[i] for o in omegas) for i in range(d)]
    whi = [max(o[i] for o in omegas) for i in range(d)]
    lo = [box.lo[i] - whi[i] for i in range(d)]
    hi = [box.hi[i] - wlo[i] for i in range(d)]
    out = []
    for row in pinv:
        a = sum((min(p * l, p * h) for p, l, h in zip(row, lo, hi)), Fraction(0))
        b = sum((max(p * l, p * h) for p, l, h in zip(row, lo, hi)), Fraction(0))
        if exact:
            out.append((math.ceil(a), math.floor(b)))
        else:
            out.append((math.ceil(a) - 1, math.floor(b) + 1))
    return out


def _expand(prefix, lo, hi):
    lengths = np.maximum(hi - lo + 1, 0).astype(np.int64)
    total = int(lengths.sum())
    if total > MAX_CANDIDATES:
        raise EnumerationCapExceeded(f"more than {MAX_CANDIDATES} candidate integer vectors")
    reps = np.repeat(np.arange(prefix.shape[0]), lengths)
    starts = np.repeat(lo.astype(np.int64), lengths)
    offsets = np.arange(total) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    new = np.concatenate([prefix[reps], (starts + offsets)[:, None]], axis=1)
    return new


def _linear_run(basis, region, omegas, collect):
    """Counts (and optionally points) of ``B Z^k`` in ``region - w`` per omega."""
    exact = is_exact(basis, region_scalars(region), [list(o) for o in omegas])
    poly = geo.as_polytope(region) if not isinstance(region, geo.Box) else None
    hs = region.halfspaces() if isinstance(region, geo.Box) else poly.halfspaces
    k = len(basis[0])
    ranges = _preimage_ranges(basis, geo.bounding_box(region), omegas, exact)
    if any(lo > hi for lo, hi in ranges):
        return [0] * len(omegas), ([_no_points(k) for _ in omegas] if collect else None)
    order = sorted(range(k), key=lambda i: ranges[i][1] - ranges[i][0])
    b_perm = tuple(tuple(row[i] for i in order) for row in basis)
    ranges = [ranges[i] for i in order]
    N = [n for n, _ in hs]
    G = [tuple(linalg.dot(n, col) for col in linalg.columns(b_perm)) for n in N]
    c = [cc for _, cc in hs]
    system = _LinearSystem(G, c, N, exact)
    counts = np.zeros(len(omegas), dtype=object)
    points = [[] for _ in omegas] if collect else None
    # omegas are processed in blocks so the (rows, S, T) work arrays stay small
    block = max(1, min(len(omegas), 4096))
    for s0 in range(0, len(omegas), block):
        oms = omegas[s0 : s0 + block]
        prefix = np.zeros((1, 0), dtype=np.int64)
        for level in range(k):
            rlo, rhi = ranges[level]
            if system.levels[level] is None:
                lo = np.full((len(oms), prefix.shape[0]), rlo, dtype=np.int64)
                hi = np.full((len(oms), prefix.shape[0]), rhi, dtype=np.int64)
                if level < k - 1:
                    prefix = _expand(prefix, lo.min(axis=0), hi.max(axis=0))
                    continue
            G, rhs = system.evaluate(level, oms)
            pieces_lo, pieces_hi = [], []
            step = max(1, _CHUNK // max(1, G.shape[0] * len(oms)))
            for t0 in range(0, max(prefix.shape[0], 1), step):
                pre = prefix[t0 : t0 + step]
                if pre.dtype != G.dtype:
                    pre = pre.astype(G.dtype)
                lo, hi = _intervals(G, rhs, pre, exact)
                lo = np.maximum(lo, rlo)
                hi = np.minimum(hi, rhi)
                if level == k - 1:
                    width = np.maximum(hi - lo + 1, 0)
                    counts[s0 : s0 + len(oms)] += width.sum(axis=1)
                    if collect:
                        for si in range(len(oms)):
                            pts = _expand(prefix[t0 : t0 + step], lo[si], hi[si])
                            points[s0 + si].append(pts)
                else:
                    valid = hi >= lo
                    lo_u = np.where(valid, lo, 2**60).min(axis=0)
                    hi_u = np.where(valid, hi, -(2**60)).max(axis=0)
                    pieces_lo.append(lo_u)
                    pieces_hi.append(hi_u)
            if level < k - 1:
                if prefix.shape[0] == 0:
                    break
                lo_all = np.concatenate(pieces_lo).astype(np.int64)
                hi_all = np.concatenate(pieces_hi).astype(np.int64)
                prefix = _expand(prefix, lo_all, hi_all)
    inv = [order.index(i) for i in range(k)]
    out_points = None
    if collect:
        out_points = []
        for chunks in points:
            out_points.append(_sort_rows(np.concatenate(chunks)[:, inv]) if chunks else _no_points(k))
    return [int(x) for x in counts], out_points


def _no_points(k: int) -> np.ndarray:
    return np.zeros((0, k), dtype=np.int64)


def _sort_rows(arr: np.ndarray) -> np.ndarray:
    """Rows in lexicographic order."""
    if arr.shape[0] < 2:
        return arr
    return arr[np.lexsort(arr.T[::-1])]


def region_scalars(region) -> list:
    if isinstance(region, geo.Box):
        return list(region.lo) + list(region.hi)
    if isinstance(region, geo.Ball):
        return list(region.center) + [region.radius]
    if isinstance(region, geo.ConvexPolytope):
        return [x for n, c in region.halfspaces for x in (*n, c)]
    if isinstance(region, geo.RegionUnion):
        return [x for p in region.parts for x in region_scalars(p)]
    raise LatticeError(f"unsupported region {type(region).__name__}")


def _quad_interval(alpha, beta, gamma, exact):
    """Integers ``x`` with ``alpha x^2 + beta x + gamma <= 0`` (alpha > 0)."""
    if not exact:
        disc = beta * beta - 4 * alpha * gamma
        tol = EPS_GEOM * (1 + abs(beta) + abs(gamma))
        if disc < -tol:
            return 1, 0
        s = math.sqrt(max(disc, 0.0))
        lo = (-beta - s) / (2 * alpha)
        hi = (-beta + s) / (2 * alpha)
        return math.ceil(lo - 1e-9 * (1 + abs(lo))), math.floor(hi + 1e-9 * (1 + abs(hi)))
    den = _lcm_den([alpha, beta, gamma])
    A, Bq, Cq = int(alpha * den), int(beta * den), int(gamma * den)
    disc = Bq * Bq - 4 * A * Cq
    if disc < 0:
        return 1, 0
    s = math.isqrt(disc)

    def q(x):
        return A * x * x + Bq * x + Cq

    hi = (-Bq + s) // (2 * A)
    while q(hi + 1) <= 0:
        hi += 1
    lo = -((Bq + s) // (2 * A))
    while q(lo - 1) <= 0:
        lo -= 1
    while lo <= hi and q(lo) > 0:
        lo += 1
    while hi >= lo and q(hi) > 0:
        hi -= 1
    return lo, hi


def _schur_levels(Q, p, s, exact):
    """Quadratic forms ``x^T Q x + 2 p.x + s`` projected onto leading variables."""
    k = len(Q)
    levels = [None] * k
    levels[k - 1] = (Q, p, s)
    for var in range(k - 1, 0, -1):
        a = Q[var][var]
        Qn = [[Q[i][j] - Q[i][var] * Q[var][j] / a for j in range(var)] for i in range(var)]
        pn = [p[i] - Q[i][var] * p[var] / a for i in range(var)]
        sn = s - p[var] * p[var] / a
        Q, p, s = Qn, pn, sn
        levels[var - 1] = (Q, p, s)
    return levels


def _quadratic_run(basis, ball: geo.Ball, omega, collect, cap_state):
    exact = is_exact(basis, list(ball.center), [ball.radius], list(omega))
    # widest coordinate range goes last, where it costs one interval solve
    gram = np.array(linalg.to_float(linalg.matmul(linalg.transpose(basis), basis)))
    order = list(np.argsort(np.diag(np.linalg.inv(gram)), kind="stable"))
    inv = [order.index(i) for i in range(len(order))]
    basis = linalg.from_columns([linalg.columns(basis)[i] for i in order])
    bt = linalg.transpose(basis)
    u = tuple(o - c for o, c in zip(omega, ball.center))
    Q = [list(r) for r in linalg.matmul(bt, basis)]
    p = list(linalg.matvec(bt, u))
    s = linalg.dot(u, u) - ball.radius * ball.radius
    if not exact:
        Q = [[float(x) for x in r] for r in Q]
        p = [float(x) for x in p]
        s = float(s)
    k = len(Q)
    levels = _schur_levels(Q, p, s, exact)
    count = 0
    pts = [] if collect else None
    prefix: list[int] = []

    def rec(level):
        nonlocal count
        Ql, pl, sl = levels[level]
        alpha = Ql[level][level]
        beta = 2 * (sum((Ql[level][i] * prefix[i] for i in range(level)), 0) + pl[level])
        gamma = sl
        for i in range(level):
            gamma += 2 * pl[i] * prefix[i]
            for j in range(level):
                gamma += Ql[i][j] * prefix[i] * prefix[j]
        lo, hi = _quad_interval(alpha, beta, gamma, exact)
        if lo > hi:
            return
        if level == k - 1:
            count += hi - lo + 1
            if collect:
                pts.extend(tuple(prefix) + (x,) for x in range(lo, hi + 1))
            return
        cap_state[0] += hi - lo + 1
        if cap_state[0] > MAX_CANDIDATES:
            raise EnumerationCapExceeded(f"more than {MAX_CANDIDATES} candidate integer vectors")
        for x in range(lo, hi + 1):
            prefix.append(x)
            rec(level + 1)
            prefix.pop()

    rec(0)
    if not collect:
        return count, None
    arr = np.array(pts, dtype=np.int64).reshape(-1, k)
    return count, _sort_rows(arr[:, inv])


def _run(L: PointLattice, R, omegas, collect=False, reduce=False):
    omegas = [tuple(to_scalar(x) for x in o) for o in omegas]
    if R.dim != L.dim or any(len(o) != L.dim for o in omegas):
        raise geo.DimensionMismatch(f"lattice in R^{L.dim}, region/translation of another dimension")
    basis, unimod = L.basis, None
    if reduce and L.exact:
        basis, unimod = linalg.lll_reduce(L.basis)
    if isinstance(R, geo.RegionUnion):
        results = [_run_single(basis, part, omegas, True) for part in R.parts]
        counts, pts = [], []
        for si in range(len(omegas)):
            merged = np.unique(np.concatenate([res[1][si] for res in results]), axis=0)
            counts.append(merged.shape[0])
            pts.append(merged)
        out_pts = pts if collect else None
    else:
        counts, out_pts = _run_single(basis, R, omegas, collect)
    if collect and unimod is not None:
        u = np.array([[int(x) for x in row] for row in unimod], dtype=np.int64)
        out_pts = [_sort_rows(arr @ u.T) for arr in out_pts]
    return counts, out_pts


def _run_single(basis, R, omegas, collect):
    if isinstance(R, geo.Ball):
        counts, pts = [], []
        cap = [0]
        for o in omegas:
            c, p = _quadratic_run(basis, R, o, collect, cap)
            counts.append(c)
            pts.append(p)
        return counts, (pts if collect else None)
    if isinstance(R, (geo.Box, geo.ConvexPolytope)):
        return _linear_run(basis, R, omegas, collect)
    raise geo.UnboundedRegionError(f"cannot count in region of type {type(R).__name__}")


def enumerate_coords(L: PointLattice, R, omega=None, reduce: bool = False) -> np.ndarray:
    """Integer coordinates ``m`` (one row each) with ``Bm in R - omega``, lexicographically sorted."""
    if omega is None:
        omega = tuple(Fraction(0) for _ in range(L.dim))
    return _run(L, R, [omega], collect=True, reduce=reduce)[1][0]


def points_of(L: PointLattice, coords: np.ndarray) -> list[tuple]:
    """``B m`` for each row of ``coords``, as scalar tuples."""
    if coords.shape[0] == 0:
        return []
    if not L.exact:
        return [tuple(float(x) for x in row) for row in coords @ np.array(linalg.to_float(L.basis)).T]
    den = _lcm_den([x for row in L.basis for x in row])
    b = np.array([[int(x * den) for x in row] for row in L.basis], dtype=object)
    scaled = coords.astype(object) @ b.T
    return [tuple(Fraction(int(x), den) for x in row) for row in scaled]


def enumerate_in_region(L: PointLattice, R, reduce: bool = False) -> list[tuple[tuple, tuple]]:
    """All ``(m, Bm)`` with ``Bm in R``, sorted by ``m``."""
    coords = enumerate_coords(L, R, reduce=reduce)
    return list(zip((tuple(int(x) for x in row) for row in coords), points_of(L, coords)))


def count_in_translate(L: PointLattice, R, omega=None, reduce: bool = False) -> int:
    """``#(L ∩ (R - omega))``; closed regions, boundary points count."""
    if omega is None:
        omega = tuple(Fraction(0) for _ in range(L.dim))
    return _run(L, R, [omega], reduce=reduce)[0][0]


def count_in_translates(L: PointLattice, R, omegas: Sequence, reduce: bool = False) -> list[int]:
    """Batch version of :func:`count_in_translate`."""
    if not omegas:
        return []
    return _run(L, R, list(omegas), reduce=reduce)[0]


def sup_count_upper(L: PointLattice, V: geo.Box) -> int:
    """Certified bound on ``sup_w #(L ∩ (V - w))``: the count in ``V - V``."""
    return count_in_translate(L, geo.difference_set(V))


def _grid_axis(lo, hi, g, endpoint=True):
    n = g + 1 if endpoint else g
    return [lo + (hi - lo) * Fraction(i, g) if is_exact(lo, hi) else lo + (hi - lo) * i / g for i in range(n)]


def cell_grid(L: PointLattice, grid: int) -> list[tuple]:
    """Points ``sum_i (t_i / grid) b_i`` with ``0 <= t_i < grid``."""
    if grid ** L.rank > MAX_SAMPLES:
        raise LatticeError(f"cell grid of {grid}^{L.rank} samples is too large")
    cols = linalg.columns(L.basis)
    out = []
    for ts in itertools.product(range(grid), repeat=L.rank):
        v = [Fraction(0)] * L.dim
        for t, col in zip(ts, cols):
            v = [a + Fraction(t, grid) * b for a, b in zip(v, col)]
        out.append(tuple(v))
    return out


def box_grid(V: geo.Box, grid: int) -> list[tuple]:
    if (grid + 1) ** V.dim > MAX_SAMPLES:
        raise LatticeError(f"box grid of {grid + 1}^{V.dim} samples is too large")
    axes = [_grid_axis(l, h, grid) for l, h in zip(V.lo, V.hi)]
    return [tuple(p) for p in itertools.product(*axes)]


def sup_count_sampled(L: PointLattice, V: geo.Box, grid: int = 16) -> tuple[int, tuple]:
    """Largest count over sampled translations; a lower bound for the supremum.

    Samples are ``0``, a grid on one fundamental cell and a grid on ``V``.
    Ties keep the first sample, so ``0`` wins when it attains the maximum.
    """
    if grid < 1:
        raise LatticeError("grid must be >= 1")
    zero = tuple(Fraction(0) for _ in range(L.dim))
    samples = [zero] + cell_grid(L, grid) + box_grid(V, grid)
    counts = count_in_translates(L, V, samples)
    best = max(range(len(samples)), key=lambda i: (counts[i], -i))
    return counts[best], samples[best]


def inf_count_sampled(L: PointLattice, Q: geo.Box, grid: int = 16) -> int:
    """Smallest count of ``L ∩ (Q - w)`` over a grid of ``w`` in ``Q`` (advisory)."""
    if grid < 1:
        raise LatticeError("grid must be >= 1")
    return min(count_in_translates(L, Q, box_grid(Q, grid)))


def points_to_csv(points: Iterable[tuple[tuple, tuple]], out=None) -> str:
    """CSV with integer coordinates ``m1..mk`` then point coordinates ``x1..xd``."""
    points = list(points)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if points:
        k, d = len(points[0][0]), len(points[0][1])
        w.writerow([f"m{i + 1}" for i in range(k)] + [f"x{i + 1}" for i in range(d)])
        for m, x in points:
            w.writerow(list(m) + [format_scalar(v) for v in x])
    text = buf.getvalue()
    if out is not None:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text
