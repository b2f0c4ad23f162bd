"""Builders for the worked example systems and generic wavelet systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import conditions as cond
from . import geometry as geo
from . import lattice as lat
from . import linalg
from . import profiles as prof
from .scalar import format_scalar, is_exact, lt, to_scalar

EXAMPLE_NAMES = ("main_example", "fail_uce", "wavelet", "compact_open")
DEFAULTS = {"a": Fraction(1, 20), "N": Fraction(2), "r": Fraction(1), "n_max": 8, "j_max": 40}


class ParameterError(ValueError):
    pass


@dataclass
class ExampleSpec:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        name = self.name.replace("-", "_")
        if name == "main":
            name = "main_example"
        if name not in EXAMPLE_NAMES:
            raise ParameterError(f"unknown example {self.name!r}; choose from {', '.join(EXAMPLE_NAMES)}")
        self.name = name
        if name == "main_example":
            a = to_scalar(self.params.get("a", DEFAULTS["a"]))
            if not (lt(0, a) and lt(a, Fraction(1, 10))):
                raise ParameterError("main example requires 0 < a < 1/10")
        if name == "fail_uce":
            if not lt(1, to_scalar(self.params.get("N", DEFAULTS["N"]))):
                raise ParameterError("fail_uce requires N > 1")


# ---------------------------------------------------------------------------
# main example


def _dyadic(n: int) -> tuple[Fraction, Fraction]:
    """Closed side interval of the n-th diagonal square: [-1 + 2^-n, -1 + 2^-(n-1)]."""
    return Fraction(-1) + Fraction(1, 2**n), Fraction(-1) + Fraction(1, 2 ** (n - 1))


def square_I(n: int) -> geo.Box:
    lo, hi = _dyadic(n)
    return geo.Box((lo, lo), (hi, hi))


def in_I(n: int, w) -> bool:
    """Membership in the half-open square (n >= 1) or in its complement (n = 0)."""
    if n >= 1:
        lo, hi = _dyadic(n)
        return all(lo <= x < hi for x in w)
    if not all(-1 <= x <= 1 for x in w):
        return False
    x, y = w
    if not (-1 < x < 0 and -1 < y < 0):
        return True
    # both coordinates lie in the same dyadic level exactly when w is in some I_n
    return _level(x) != _level(y)


def _level(x: Fraction) -> int:
    n = 1
    while not (_dyadic(n)[0] <= x < _dyadic(n)[1]):
        n += 1
    return n


def complement_pieces(n_max: int) -> list[geo.Box]:
    """Rectangles tiling ``[-1,1]^2`` minus the squares ``I_1..I_{n_max}``."""
    one, zero = Fraction(1), Fraction(0)
    rects = [geo.Box((zero, -one), (one, one)), geo.Box((-one, zero), (zero, one))]
    for n in range(1, n_max + 1):
        lo, hi = _dyadic(n)
        rects.append(geo.Box((lo, -one), (hi, lo)))
        if hi < 0:
            rects.append(geo.Box((lo, hi), (hi, zero)))
    lo, _ = _dyadic(n_max)
    rects.append(geo.Box((-one, -one), (lo, zero)))
    return rects


def main_example_matrix(a, j, literal: bool = False) -> tuple:
    a, j = to_scalar(a), to_scalar(j)
    if literal:
        return linalg.as_matrix([[a, j], [-a, j]])
    return linalg.as_matrix([[a, j], [a, -j]])


def build_main_example(a=DEFAULTS["a"], n_max: int = DEFAULTS["n_max"], literal: bool = False) -> cond.GTISystem:
    """Materialised entries: label 1 on the complement of the squares, ``4^n + 1`` on ``I_n``.

    The translation lattice is ``C_j Z^2`` with ``C_j = [[a, j], [a, -j]]``
    (``literal=True`` uses ``[[a, j], [-a, j]]`` instead).  At truncation
    ``n_max`` the complement piece carries ``1 / area`` so every entry has
    unit mass.
    """
    spec = ExampleSpec("main_example", {"a": a})
    a = to_scalar(spec.params.get("a", a))
    if not is_exact(a):
        raise ParameterError("main example needs a rational a")
    if n_max < 1:
        raise ParameterError("n_max must be >= 1")
    rects = complement_pieces(n_max)
    area = sum(r.volume() for r in rects)
    eta0 = 1 / area
    entries = [cond.SystemEntry(1, lat.make_subgroup(main_example_matrix(a, 1, literal), 2), prof.make_profile([(r, eta0) for r in rects]))]
    for n in range(1, n_max + 1):
        j = 4**n + 1
        entries.append(cond.SystemEntry(j, lat.make_subgroup(main_example_matrix(a, j, literal), 2), prof.make_profile([(square_I(n), Fraction(4**n))])))
    tails = {
        "lic": prof.TailDescriptor("geometric", Fraction(1, 2), 9 / a),
        "calderon": prof.TailDescriptor("geometric", Fraction(1, 4), 2 / a),
    }
    box = geo.Box((-1, -1), (1, 1))
    return cond.GTISystem(tuple(entries), box, tails, (), "main_example", {"a": a, "n_max": n_max, "eta0": eta0, "literal": literal})


def supin_table(a=DEFAULTS["a"], n_max: int = 8, grid: int = 50, literal: bool = False) -> list[dict]:
    """Sampled corner counts against ``4j 2^{-(n-1)} + 1`` for every entry and level."""
    a = to_scalar(a)
    window = geo.Box((-1, -1), (1, 1))
    labels = [1] + [4**n + 1 for n in range(1, n_max + 1)]
    samples = {}
    for n in range(0, n_max + 1):
        if n == 0:
            pts = [(Fraction(-1) + Fraction(2 * i, grid), Fraction(-1) + Fraction(2 * k, grid)) for i in range(grid) for k in range(grid)]
            samples[n] = [w for w in pts if in_I(0, w)]
        else:
            lo, hi = _dyadic(n)
            axis = [lo + (hi - lo) * Fraction(i, grid) for i in range(grid)]
            samples[n] = [(x, y) for x in axis for y in axis]
    rows = []
    for j in labels:
        dual = lat.annihilator(lat.make_subgroup(main_example_matrix(a, j, literal), 2))
        for n in range(0, n_max + 1):
            counts = lat.count_in_translates(dual, window, samples[n])
            bound = 4 * j * Fraction(2) ** (1 - n) + 1
            worst = max(counts)
            rows.append({"j": j, "n": n, "samples": len(counts), "max_count": worst, "bound": bound, "violations": sum(c > bound for c in counts)})
    return rows


# ---------------------------------------------------------------------------
# example with growing counts


def fail_uce_lic_tail(N, r) -> prof.TailDescriptor:
    """Geometric majorant ``c q^j`` of the LIC terms with ``q = (N+1)/(2N)``.

    Term j is at most ``(2r)^2 (4r/j + 1)(4rj + 1) N^-j``.  With
    ``rho = 1/(N q) < 1`` the factor ``(4r/j + 1)(4rj + 1) rho^j`` decreases once
    ``j >= rho/(1 - rho)``, so its maximum is attained among the first indices.
    """
    N, r = to_scalar(N), to_scalar(r)
    q = (N + 1) / (2 * N)
    rho = 1 / (N * q)
    stop = int(rho / (1 - rho)) + 2
    best = max((4 * r / j + 1) * (4 * r * j + 1) * rho**j for j in range(1, stop + 1))
    return prof.TailDescriptor("geometric", q, (2 * r) ** 2 * best)


def build_fail_uce(N=DEFAULTS["N"], r=DEFAULTS["r"], j_max: int = DEFAULTS["j_max"]) -> cond.GTISystem:
    """Entries ``j = 1..j_max`` with ``Gamma_j = diag(1/j, j) Z^2`` and density ``N^-j`` on ``[-r, r]^2``."""
    N, r = to_scalar(N), to_scalar(r)
    ExampleSpec("fail_uce", {"N": N})
    if not lt(0, r):
        raise ParameterError("r must be positive")
    if j_max < 0:
        raise ParameterError("j_max must be >= 0")
    box = geo.Box((-r, -r), (r, r))
    entries = []
    for j in range(1, j_max + 1):
        C = linalg.diag([Fraction(1, j), Fraction(j)])
        density = N ** (-j)
        entries.append(cond.SystemEntry(j, lat.make_subgroup(C, 2), prof.make_profile([(box, density)])))
    mass = (2 * r) ** 2
    tails = {
        "lic": fail_uce_lic_tail(N, r),
        "calderon": prof.TailDescriptor("geometric", 1 / N, mass),
        "temperate": prof.TailDescriptor("geometric", 1 / N, mass),
    }
    return cond.GTISystem(tuple(entries), box, tails, (), "fail_uce", {"N": N, "r": r, "j_max": j_max})


def fail_uce_lic_closed_form(N=2, r=1, terms: int = 400) -> float:
    """``(2r)^2 sum_j (4r/j + 1)(4rj + 1) N^-j`` summed in floating point."""
    import math

    N, r = float(N), float(r)
    total = math.fsum((2 * r) ** 2 * (4 * r / j + 1) * (4 * r * j + 1) * N ** (-j) for j in range(1, terms + 1))
    return total


# ---------------------------------------------------------------------------
# wavelet systems


def build_wavelet_system(a, gamma: lat.CoCompactSubgroup, psi2: prof.EnergyProfile, j_range: Iterable[int], tails=None, name: str = "wavelet") -> cond.GTISystem:
    """Entries ``Gamma_j = A^{-j} Gamma`` with profile ``psi2`` dilated by ``A``."""
    a = linalg.as_matrix(a)
    det = linalg.det(a)
    if det == 0:
        raise linalg.SingularMatrixError("dilation matrix is singular")
    notes = [] if abs(det) > 1 else ["|det A| <= 1"]
    entries, boxes = [], []
    for j in j_range:
        C = linalg.matmul(linalg.mat_pow(a, -j), gamma.C)
        g = lat.make_subgroup(C, gamma.n)
        expected = abs(det) ** (-j) * lat.covolume(gamma)
        if is_exact(expected) and lat.covolume(g) != expected:
            raise AssertionError("covolume law violated")
        p = prof.dilate_profile(psi2, a, j)
        entries.append(cond.SystemEntry(j, g, p))
        sb = p.support_box()
        if sb is not None:
            boxes.append(sb)
    if not boxes:
        raise ParameterError("wavelet system needs a non-zero profile")
    work = geo.bounding_box(geo.RegionUnion(tuple(boxes)))
    return cond.GTISystem(tuple(entries), work, dict(tails or {}), (), name, {"notes": notes})


def dyadic_wavelet(j_abs: int = 10) -> cond.GTISystem:
    """1D dyadic system: ``A = 2``, ``Gamma = Z``, ``psi2 = 1`` on ``[1,2] ∪ [-2,-1]``."""
    psi2 = prof.make_profile([(geo.Box((1,), (2,)), 1), (geo.Box((-2,), (-1,)), 1)])
    return build_wavelet_system([[2]], lat.make_subgroup([[1]], 1), psi2, range(-j_abs, j_abs + 1))


# ---------------------------------------------------------------------------
# compact-open example


def compact_open_counts(j: int) -> tuple[int, Fraction, Fraction]:
    """``(#(dual ∩ H-perp), covol, covol_H)`` for ``Gamma_j = jZ x T_j`` in ``Z x T``."""
    if int(j) != j or j < 1:
        raise ParameterError("j must be a positive integer")
    j = int(j)
    count = j  # all j-th roots of unity lie in T
    covol = Fraction(1)  # index j of jZ in Z times measure 1/j of T_j-cosets
    return count, covol, covol / j


# ---------------------------------------------------------------------------
# named construction


def build_example(name: str, **params):
    spec = ExampleSpec(name, params)
    p = spec.params
    if spec.name == "main_example":
        return build_main_example(p.get("a", DEFAULTS["a"]), int(p.get("n_max", DEFAULTS["n_max"])), bool(p.get("literal", False)))
    if spec.name == "fail_uce":
        return build_fail_uce(p.get("N", DEFAULTS["N"]), p.get("r", DEFAULTS["r"]), int(p.get("j_max", DEFAULTS["j_max"])))
    if spec.name == "wavelet":
        return dyadic_wavelet(int(p.get("j_abs", 10)))
    raise ParameterError("compact_open is closed-form arithmetic, not a system; use compact_open_counts")


def default_test_set(name: str, s: cond.GTISystem) -> geo.Box:
    name = ExampleSpec(name).name
    if name == "wavelet":
        return geo.Box((1,), (4,))
    return s.working_box


def verification_table(name: str, **params) -> list[dict]:
    """Rows ``{quantity, computed, reference, passed}`` for a named example."""
    spec = ExampleSpec(name, params)
    p = spec.params
    rows = []
    if spec.name == "main_example":
        a = to_scalar(p.get("a", DEFAULTS["a"]))
        n_max = int(p.get("n_max", DEFAULTS["n_max"]))
        s = build_main_example(a, n_max)
        K = s.working_box
        sup = supin_table(a, n_max, int(p.get("grid", 20)))
        viol = sum(r["violations"] for r in sup)
        rows.append({"quantity": "corner counts <= 4j 2^(1-n) + 1 (all sampled w, all j, n)", "computed": f"{viol} violations", "reference": "0", "passed": viol == 0})
        lic = cond.lic_partial(s, K)
        rows.append({"quantity": "LIC partial sum", "computed": lic.total, "reference": f"<= 8/a + 2/a = {format_scalar(10 / a)}", "passed": lic.total <= 10 / a})
        cal = cond.calderon_partial(s, K)
        rows.append({"quantity": "Calderon partial sum", "computed": cal.total, "reference": f"<= 4/(2a) = {format_scalar(2 / a)}", "passed": cal.total <= 2 / a})
        tem = cond.temperate_partial(s, K)
        rows.append({"quantity": "temperate partial sum", "computed": tem.total, "reference": f"= {n_max + 1} (diverges)", "passed": tem.total == n_max + 1})
        rows.append({"quantity": "temperate verdict", "computed": tem.verdict.value, "reference": "GROWTH_EVIDENCE", "passed": tem.verdict is cond.Verdict.GROWTH_EVIDENCE})
    elif spec.name == "fail_uce":
        N = to_scalar(p.get("N", DEFAULTS["N"]))
        r = to_scalar(p.get("r", DEFAULTS["r"]))
        j_max = int(p.get("j_max", DEFAULTS["j_max"]))
        s = build_fail_uce(N, r, j_max)
        K = s.working_box
        unit = geo.Box((0, 0), (1, 1))
        bad = [j for j in range(2, j_max + 1) if lat.count_in_translate(lat.annihilator(s.entries[j - 1].subgroup), unit) != j + 1]
        rows.append({"quantity": "#(dual ∩ [0,1]^2) = j + 1", "computed": f"{len(bad)} mismatches", "reference": "0", "passed": not bad})
        lic = cond.lic_partial(s, K)
        closed = (2 * r) ** 2 * sum((4 * r / j + 1) * (4 * r * j + 1) * N ** (-j) for j in range(1, 400))
        rows.append({"quantity": "LIC partial sum", "computed": lic.total, "reference": f"<= {float(closed):.6g}", "passed": lic.total <= closed and lic.verdict is cond.Verdict.BOUND_CERTIFIED})
        cal = cond.calderon_partial(s, K)
        expect = (2 * r) ** 2 * (1 - N ** (-j_max)) / (N - 1)
        rows.append({"quantity": "Calderon partial sum", "computed": cal.total, "reference": f"= {format_scalar(expect)}", "passed": cal.total == expect})
        uce = cond.uce_check([e.subgroup for e in s.entries], geo.Box((0, 0), (1, 1)), [e.label for e in s.entries], int(p.get("grid", 8)))
        rows.append({"quantity": "UCE verdict", "computed": uce.verdict.value, "reference": "GROWTH_EVIDENCE", "passed": uce.verdict is cond.Verdict.GROWTH_EVIDENCE})
    elif spec.name == "wavelet":
        s = dyadic_wavelet(int(p.get("j_abs", 10)))
        K = geo.Box((1,), (4,))
        cal = cond.calderon_partial(s, K)
        rows.append({"quantity": "Calderon integral over [1,4]", "computed": cal.total, "reference": "= 3", "passed": cal.total == 3})
        tem = cond.temperate_partial(s, K)
        rows.append({"quantity": "temperate partial sums over [1,4]", "computed": max(tem.partial_sums), "reference": "<= 3", "passed": max(tem.partial_sums) <= 3})
    else:
        j = int(p.get("j", 7))
        count, covol, covol_h = compact_open_counts(j)
        rows.append({"quantity": f"(count, covol, covolH) at j={j}", "computed": f"({count}, {format_scalar(covol)}, {format_scalar(covol_h)})", "reference": f"({j}, 1, 1/{j})", "passed": (count, covol, covol_h) == (j, 1, Fraction(1, j))})
        rows.append({"quantity": "count / (1 + covol)", "computed": Fraction(count, 2), "reference": "j/2 (unbounded in j)", "passed": Fraction(count, 2) == Fraction(j, 2)})
    return rows
