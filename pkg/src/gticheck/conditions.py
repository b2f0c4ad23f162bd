"""Evaluators for LIC, Calderón, temperateness, counting and roundedness conditions.

Every evaluator works at a finite truncation and returns a ConditionReport
with per-index rows.  Without a tail descriptor the strongest verdict is
``SATISFIED_AT_TRUNCATION``; with one, every computed term is checked against
the descriptor before ``BOUND_CERTIFIED`` is issued.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import geometry as geo
from . import lattice as lat
from . import linalg
from . import profiles as prof
from . import spectral
from .scalar import Scalar, format_scalar, is_exact, le, to_scalar

SLOPE_MIN = 0.5
R2_MIN = 0.9


class ValidationError(ValueError):
    pass


class Verdict(str, enum.Enum):
    SATISFIED_AT_TRUNCATION = "SATISFIED_AT_TRUNCATION"
    BOUND_CERTIFIED = "BOUND_CERTIFIED"
    GROWTH_EVIDENCE = "GROWTH_EVIDENCE"
    INCONCLUSIVE = "INCONCLUSIVE"


EXIT_CODES = {
    Verdict.SATISFIED_AT_TRUNCATION: 0,
    Verdict.BOUND_CERTIFIED: 0,
    Verdict.GROWTH_EVIDENCE: 2,
    Verdict.INCONCLUSIVE: 3,
}


def exit_code(verdict: Verdict) -> int:
    return EXIT_CODES[Verdict(verdict)]


@dataclass(frozen=True)
class SystemEntry:
    label: int
    subgroup: lat.CoCompactSubgroup
    profile: prof.EnergyProfile


@dataclass(frozen=True)
class GTISystem:
    """Indexed family ``j -> (Gamma_j, p_j)`` on a working box.

    ``tails`` maps a condition name (``lic``, ``calderon``, ``temperate``) to a
    TailDescriptor indexed by entry position (1-based).  ``excluded`` lists
    boxes or points a test set must avoid.
    """

    entries: tuple
    working_box: geo.Box
    tails: dict = field(default_factory=dict, compare=False)
    excluded: tuple = ()
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        d = self.working_box.dim
        for e in self.entries:
            if e.subgroup.dim != d or (e.profile.dim is not None and e.profile.dim != d):
                raise geo.DimensionMismatch(f"entry {e.label} does not live in R^{d}")
            sb = e.profile.support_box()
            if sb is not None and not sb.is_subset(self.working_box):
                raise ValidationError(f"profile of entry {e.label} leaves the working box")
        labels = [e.label for e in self.entries]
        if len(set(labels)) != len(labels):
            raise ValidationError("entry labels must be distinct")

    @property
    def dim(self) -> int:
        return self.working_box.dim

    def tail(self, condition: str) -> prof.TailDescriptor:
        return self.tails.get(condition, prof.NO_TAIL)

    @property
    def exact(self) -> bool:
        return all(is_exact(e.subgroup.C) and e.profile.exact for e in self.entries) and is_exact(
            list(self.working_box.lo), list(self.working_box.hi)
        )


@dataclass
class GrowthVerdict:
    ratios: list
    slope: Optional[float]
    r2: Optional[float]
    slope_min: float = SLOPE_MIN
    r2_min: float = R2_MIN
    method: str = "regression"
    growth: bool = False

    def to_dict(self) -> dict:
        return {
            "ratios": [float(r) for r in self.ratios],
            "slope": self.slope,
            "r2": self.r2,
            "slope_min": self.slope_min,
            "r2_min": self.r2_min,
            "method": self.method,
            "growth": self.growth,
        }


def growth_verdict(values: Sequence, slope_min: float = SLOPE_MIN, r2_min: float = R2_MIN) -> GrowthVerdict:
    """Log-log regression of ``values`` against their 1-based position.

    The fit uses the second half of the sequence (at least three points) so an
    early transient of a convergent sequence is not read as growth.  With fewer
    than three positive values the fallback flags growth when the last value is
    at least twice the first.
    """
    vals = [float(v) for v in values]
    n = len(vals)
    start = 0 if n < 6 else n // 2
    pts = [(math.log(k + 1), math.log(v)) for k, v in enumerate(vals) if k >= start and v > 0]
    if len(pts) < 3:
        pos = [v for v in vals if v > 0]
        grow = len(pos) >= 2 and pos[-1] >= 2 * pos[0]
        return GrowthVerdict(vals, None, None, slope_min, r2_min, "ratio-doubling", grow)
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot <= 1e-300 else 1.0 - float(np.sum(resid**2)) / ss_tot
    grow = bool(slope > slope_min and r2 > r2_min)
    return GrowthVerdict(vals, float(slope), r2, slope_min, r2_min, "regression", grow)


@dataclass
class TermRow:
    label: object
    position: int
    term: Scalar
    partial: Scalar
    data: dict = field(default_factory=dict)


def _cell(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, Fraction):
        return format_scalar(x) if x.denominator <= 10**6 else f"{float(x):.10g}"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _json_scalar(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return {"exact": format_scalar(x), "approx": float(x)}
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [_json_scalar(v) for v in x]
    if isinstance(x, dict):
        return {k: _json_scalar(v) for k, v in x.items()}
    return str(x)


@dataclass
class ConditionReport:
    condition: str
    K: Optional[geo.Box]
    rows: list
    total: Scalar
    verdict: Verdict
    growth: Optional[GrowthVerdict] = None
    tail_bound: Optional[Scalar] = None
    certified_total: Optional[Scalar] = None
    bounds_used: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    mode: str = "exact"
    notes: list = field(default_factory=list)

    @property
    def partial_sums(self) -> list:
        return [r.partial for r in self.rows]

    @property
    def terms(self) -> list:
        return [r.term for r in self.rows]

    @property
    def exit_code(self) -> int:
        return exit_code(self.verdict)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "K": None if self.K is None else {"lo": [format_scalar(x) for x in self.K.lo], "hi": [format_scalar(x) for x in self.K.hi]},
            "mode": self.mode,
            "rows": [
                {"label": _json_scalar(r.label), "position": r.position, "term": _json_scalar(r.term), "partial": _json_scalar(r.partial), **{k: _json_scalar(v) for k, v in r.data.items()}}
                for r in self.rows
            ],
            "total": _json_scalar(self.total),
            "tail_bound": _json_scalar(self.tail_bound),
            "certified_total": _json_scalar(self.certified_total),
            "verdict": self.verdict.value,
            "growth": None if self.growth is None else self.growth.to_dict(),
            "bounds_used": _json_scalar(self.bounds_used),
            "parameters": _json_scalar(self.parameters),
            "notes": list(self.notes),
        }

    def _columns(self):
        extra = []
        for r in self.rows:
            for k in r.data:
                if k not in extra:
                    extra.append(k)
        return ["label", "k", "term", "partial"] + extra

    def _row_cells(self, r):
        return [_cell(r.label), str(r.position), _cell(r.term), _cell(r.partial)] + [_cell(r.data.get(k, "")) for k in self._columns()[4:]]

    def render(self) -> str:
        cols = self._columns()
        body = [self._row_cells(r) for r in self.rows]
        widths = [max([len(c)] + [len(row[i]) for row in body]) for i, c in enumerate(cols)]
        kdesc = "-" if self.K is None else " x ".join(f"[{_cell(l)},{_cell(h)}]" for l, h in zip(self.K.lo, self.K.hi))
        lines = [f"condition: {self.condition}   K: {kdesc}   mode: {self.mode}"]
        if self.parameters:
            lines.append("parameters: " + ", ".join(f"{k}={_cell(v)}" for k, v in self.parameters.items()))
        lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
        lines.append("  ".join("-" * w for w in widths))
        for row in body:
            lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
        lines.append(f"total at truncation: {_cell(self.total)}")
        if self.tail_bound is not None:
            lines.append(f"tail bound: {_cell(self.tail_bound)}   certified total: {_cell(self.certified_total)}")
        if self.growth is not None:
            g = self.growth
            s = "n/a" if g.slope is None else f"{g.slope:.4g}"
            r2 = "n/a" if g.r2 is None else f"{g.r2:.4g}"
            lines.append(f"growth: slope={s} r2={r2} method={g.method} (thresholds slope>{g.slope_min}, r2>{g.r2_min})")
        for k, v in self.bounds_used.items():
            lines.append(f"{k}: {_cell(v)}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"verdict: {self.verdict.value}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = self._columns()
        w.writerow(cols)
        for r in self.rows:
            vals = [r.label, r.position, r.term, r.partial] + [r.data.get(k, "") for k in cols[4:]]
            w.writerow([format_scalar(v) if isinstance(v, (Fraction, float)) and not isinstance(v, bool) else v for v in vals])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# helpers


def validate_test_set(s: GTISystem, K: geo.Box) -> None:
    if K.dim != s.dim:
        raise geo.DimensionMismatch(f"test set of dimension {K.dim} for a system in R^{s.dim}")
    if not K.is_subset(s.working_box):
        raise ValidationError("test set K must lie inside the working box")
    for e in s.excluded:
        if isinstance(e, geo.Box):
            if geo.intersect_boxes(K, e) is not None:
                raise ValidationError("test set K meets the excluded set")
        elif K.contains(e):
            raise ValidationError("test set K contains an excluded point")


def select_entries(s: GTISystem, j_set=None, jmax=None) -> list[tuple[int, SystemEntry]]:
    """``(position, entry)`` pairs, positions 1-based in system order."""
    chosen = []
    wanted = None if j_set is None else set(j_set)
    for pos, e in enumerate(s.entries, start=1):
        if wanted is not None and e.label not in wanted:
            continue
        if jmax is not None and e.label > jmax:
            continue
        chosen.append((pos, e))
    return chosen


def _mode(*flags) -> str:
    return "exact" if all(flags) else "float"


def _series_report(name, s, K, chosen, terms, extras, parameters, slope_min=SLOPE_MIN, r2_min=R2_MIN, notes=()):
    rows, partial = [], Fraction(0)
    for (pos, e), t, ex in zip(chosen, terms, extras):
        partial = partial + t
        rows.append(TermRow(e.label, pos, t, partial, ex))
    tail = s.tail(name)
    notes = list(notes)
    report = ConditionReport(name, K, rows, partial, Verdict.SATISFIED_AT_TRUNCATION, parameters=parameters)
    report.mode = _mode(s.exact, is_exact(list(K.lo), list(K.hi)))
    if tail.present:
        violations = []
        for r in rows:
            b = tail.term_bound(r.position)
            if b is not None and not le(r.term, b):
                violations.append(r.label)
        if violations:
            report.verdict = Verdict.INCONCLUSIVE
            notes.append(f"terms exceed the tail descriptor at labels {violations[:10]}")
        else:
            last = max((pos for pos, _ in chosen), default=0)
            skipped = [pos for pos in range(1, last + 1) if pos not in {p for p, _ in chosen}]
            extra = sum((tail.term_bound(p) or 0 for p in skipped), Fraction(0))
            report.tail_bound = tail.tail_bound(last) + extra
            report.certified_total = partial + report.tail_bound
            report.verdict = Verdict.BOUND_CERTIFIED
            report.bounds_used["tail"] = tail.to_dict() if tail.constant is not None or tail.kind != "user" else "user function"
    if report.verdict is Verdict.SATISFIED_AT_TRUNCATION:
        report.growth = growth_verdict(report.partial_sums, slope_min, r2_min)
        if report.growth.growth:
            report.verdict = Verdict.GROWTH_EVIDENCE
    report.notes = notes
    return report


# ---------------------------------------------------------------------------
# LIC / Calderón / temperateness


@dataclass
class LicTerm:
    value: Scalar
    alphas: int  # annihilator points enumerated
    contributing: int  # points with a positive overlap integral

    def __iter__(self):
        return iter((self.value, self.alphas))


def lic_term(g: lat.CoCompactSubgroup, p: prof.EnergyProfile, K: geo.Box) -> LicTerm:
    """``covol^-1 * sum_alpha integral of p over K ∩ (K - alpha)``.

    Only annihilator points in ``K - bbox(piece ∩ K)`` can give a positive
    overlap with a piece, so each piece enumerates that subset of ``K - K``.
    """
    covol = lat.covolume(g)
    zero = tuple(Fraction(0) for _ in range(K.dim))
    total = Fraction(0)
    seen, contributing = set(), set()
    dual = lat.annihilator(g) if g.n > 0 else None
    for body, value in p.pieces:
        clipped = geo.intersect(body, K)
        if clipped is None:
            continue
        bb = geo.bounding_box(clipped)
        window = geo.Box(tuple(l - h for l, h in zip(K.lo, bb.hi)), tuple(h - l for h, l in zip(K.hi, bb.lo)))
        if dual is None:
            alphas = [((), zero)]
        else:
            alphas = lat.enumerate_in_region(dual, window)
        for m, alpha in alphas:
            seen.add(m)
            shifted = K.shift(tuple(-a for a in alpha))
            if isinstance(clipped, geo.Box):
                inter = geo.intersect_boxes(clipped, shifted)
                vol = Fraction(0) if inter is None else inter.volume()
            else:
                inter = geo.intersect(clipped, shifted)
                vol = Fraction(0) if inter is None else geo.volume(inter)
            if vol:
                contributing.add(m)
                total += value * vol
    return LicTerm(total / covol, len(seen), len(contributing))


def calderon_term(g: lat.CoCompactSubgroup, p: prof.EnergyProfile, K: geo.Box) -> Scalar:
    return prof.integrate(p, K) / lat.covolume(g)


def lic_partial(s: GTISystem, K: geo.Box, j_set=None, jmax=None, **kw) -> ConditionReport:
    validate_test_set(s, K)
    chosen = select_entries(s, j_set, jmax)
    terms, extras = [], []
    for _, e in chosen:
        t = lic_term(e.subgroup, e.profile, K)
        terms.append(t.value)
        extras.append({"covol": lat.covolume(e.subgroup), "alphas": t.alphas, "contributing": t.contributing})
    params = {"jmax": jmax, "entries": len(chosen)}
    return _series_report("lic", s, K, chosen, terms, extras, params, **kw)


def calderon_partial(s: GTISystem, K: geo.Box, j_set=None, jmax=None, **kw) -> ConditionReport:
    validate_test_set(s, K)
    chosen = select_entries(s, j_set, jmax)
    terms = [calderon_term(e.subgroup, e.profile, K) for _, e in chosen]
    extras = [{"covol": lat.covolume(e.subgroup)} for _, e in chosen]
    return _series_report("calderon", s, K, chosen, terms, extras, {"jmax": jmax, "entries": len(chosen)}, **kw)


def temperate_partial(s: GTISystem, K: geo.Box, j_set=None, jmax=None, **kw) -> ConditionReport:
    validate_test_set(s, K)
    chosen = select_entries(s, j_set, jmax)
    terms = [prof.integrate(e.profile, K) for _, e in chosen]
    extras = [{} for _ in chosen]
    return _series_report("temperate", s, K, chosen, terms, extras, {"jmax": jmax, "entries": len(chosen)}, **kw)


def split_temperate_check(s: GTISystem, K: geo.Box, N, j_set=None, jmax=None, **kw) -> ConditionReport:
    """Sum of ``∫_K p_j`` over ``covol > N`` plus the reconstruction inequality.

    ``temperate <= N * calderon(covol <= N) + split`` must hold at truncation.
    """
    N = to_scalar(N)
    if not N > 0:
        raise ValidationError("split parameter N must be positive")
    validate_test_set(s, K)
    chosen = select_entries(s, j_set, jmax)
    temperate, low_calderon = Fraction(0), Fraction(0)
    terms, extras = [], []
    for _, e in chosen:
        covol = lat.covolume(e.subgroup)
        mass = prof.integrate(e.profile, K)
        temperate += mass
        above = not le(covol, N)
        if above:
            terms.append(mass)
        else:
            terms.append(Fraction(0))
            low_calderon += mass / covol
        extras.append({"covol": covol, "split": above})
    kw_series = dict(kw)
    report = _series_report("split_temperate", s, K, chosen, terms, extras, {"N": N, "jmax": jmax}, **kw_series)
    rhs = N * low_calderon + report.total
    report.bounds_used.update({"temperate": temperate, "N_times_calderon_low": N * low_calderon, "reconstruction_rhs": rhs})
    if not le(temperate, rhs):
        report.verdict = Verdict.INCONCLUSIVE
        report.notes.append("reconstruction inequality failed at truncation")
    return report


# ---------------------------------------------------------------------------
# counting conditions


def uce_check(family: Sequence[lat.CoCompactSubgroup], K: geo.Box, labels=None, grid: int = 16, **kw) -> ConditionReport:
    """Sampled and certified counts of each annihilator in translates of K."""
    labels = list(labels) if labels is not None else list(range(1, len(family) + 1))
    rows = []
    ratios = []
    exact = True
    for pos, (label, g) in enumerate(zip(labels, family), start=1):
        dual = lat.annihilator(g)
        covol = lat.covolume(g)
        sampled, arg = lat.sup_count_sampled(dual, K, grid)
        upper = lat.sup_count_upper(dual, K)
        rho = Fraction(sampled) / (1 + covol) if is_exact(covol) else sampled / (1 + covol)
        exact = exact and dual.exact
        ratios.append(rho)
        rows.append(TermRow(label, pos, rho, max(ratios), {"covol": covol, "sampled_sup": sampled, "upper": upper, "upper_ratio": upper / (1 + covol)}))
    report = ConditionReport("uce", K, rows, max(ratios, default=Fraction(0)), Verdict.SATISFIED_AT_TRUNCATION, parameters={"grid": grid, "members": len(family)})
    report.mode = _mode(exact)
    report.growth = growth_verdict(ratios, **kw)
    if report.growth.growth:
        report.verdict = Verdict.GROWTH_EVIDENCE
    report.notes.append("one window with non-empty interior controls every compact set up to a constant")
    report.notes.append("term = sampled sup / (1 + covol); partial = running maximum")
    return report


def ball_volume(d: int, r) -> float:
    return math.pi ** (d / 2) * float(r) ** d / math.gamma(d / 2 + 1)


@dataclass
class RoundResult:
    sup: int
    argmax: tuple
    covol: Scalar
    ball_volume: float
    c_min: float

    def to_dict(self) -> dict:
        return {"sup": self.sup, "argmax": [format_scalar(x) for x in self.argmax], "covol": _json_scalar(self.covol), "ball_volume": self.ball_volume, "c_min": self.c_min}


def round_check(g: lat.CoCompactSubgroup, r, grid: int = 16) -> RoundResult:
    """Smallest ``C`` with ``sup_w #(dual ∩ (B_r - w)) <= 1 + C covol |B_r|`` on samples (advisory)."""
    r = to_scalar(r)
    if not r > 0:
        raise ValidationError("radius must be positive")
    dual = lat.annihilator(g)
    d = g.dim
    zero = tuple(Fraction(0) for _ in range(d))
    ball = geo.Ball(zero, r)
    samples = [zero] + lat.cell_grid(dual, grid) + lat.box_grid(geo.bounding_box(ball), grid)
    counts = lat.count_in_translates(dual, ball, samples)
    best = max(range(len(samples)), key=lambda i: (counts[i], -i))
    covol = lat.covolume(g)
    vol = ball_volume(d, r)
    c_min = max(0.0, (counts[best] - 1) / (float(covol) * vol))
    return RoundResult(counts[best], samples[best], covol, vol, c_min)


def round_family(family, r, labels=None, grid: int = 16, **kw) -> ConditionReport:
    labels = list(labels) if labels is not None else list(range(1, len(family) + 1))
    rows, cs = [], []
    for pos, (label, g) in enumerate(zip(labels, family), start=1):
        res = round_check(g, r, grid)
        cs.append(res.c_min)
        rows.append(TermRow(label, pos, res.c_min, max(cs), {"sup": res.sup, "covol": res.covol, "ball_volume": res.ball_volume}))
    report = ConditionReport("round", None, rows, max(cs, default=0.0), Verdict.SATISFIED_AT_TRUNCATION, parameters={"r": to_scalar(r), "grid": grid})
    report.mode = "float"
    report.growth = growth_verdict([max(c, 0.0) for c in cs], **kw)
    if report.growth.growth:
        report.verdict = Verdict.GROWTH_EVIDENCE
    report.notes.append("advisory: sup over sampled translations; term = smallest feasible C")
    return report


def lce_check(a, g: lat.CoCompactSubgroup, r, j_range: Iterable[int], **kw) -> ConditionReport:
    """``#(Gamma ∩ A^j B_r(0)) / max(1, |det A|^j)`` for each j (lattice part of Gamma)."""
    a = linalg.as_matrix(a)
    r = to_scalar(r)
    if not r > 0:
        raise ValidationError("radius must be positive")
    det = linalg.det(a)
    if det == 0:
        raise linalg.SingularMatrixError("dilation matrix is singular")
    base = g.lattice_part()
    d = g.dim
    zero = tuple(Fraction(0) for _ in range(d))
    ball = geo.Ball(zero, r)
    rows, ratios = [], []
    worst_spread = 1.0
    for pos, j in enumerate(j_range, start=1):
        basis = linalg.matmul(linalg.mat_pow(a, -j), base.basis)
        norms = [float(np.linalg.norm(c)) for c in np.array(linalg.to_float(basis)).T]
        worst_spread = max(worst_spread, max(norms) / min(norms))
        count = lat.count_in_translate(lat.PointLattice(basis), ball)
        scale = max(Fraction(1) if is_exact(det) else 1.0, abs(det) ** j)
        ratio = count / scale
        ratios.append(ratio)
        rows.append(TermRow(j, pos, ratio, max(ratios), {"count": count, "scale": scale}))
    report = ConditionReport("lce", None, rows, max(ratios, default=0), Verdict.SATISFIED_AT_TRUNCATION, parameters={"r": r, "j_range": [rw.label for rw in rows]})
    report.mode = _mode(is_exact(a), base.exact, is_exact(r))
    report.growth = growth_verdict(ratios, **kw)
    if report.growth.growth:
        report.verdict = Verdict.GROWTH_EVIDENCE
    if not abs(det) > 1:
        report.notes.append("|det A| <= 1: the estimate is not expected to be meaningful")
    if report.mode == "float" and worst_spread > 1e7:
        report.notes.append(f"basis column norms differ by {worst_spread:.2g}; float counts at the largest |j| may be inexact")
    if g.n < d:
        report.notes.append("only the discrete part of the subgroup is counted")
    report.notes.append("term = count / max(1, |det A|^j); partial = running maximum")
    return report


def lce_to_uce(a, g: lat.CoCompactSubgroup, j_range: Iterable[int], K: geo.Box, grid: int = 8, **kw) -> ConditionReport:
    """Counting estimate for ``Gamma_j = A^j Gamma`` with a spectral cross-check."""
    a = linalg.as_matrix(a)
    js = list(j_range)
    family = [lat.make_subgroup(linalg.matmul(linalg.mat_pow(a, j), g.C), g.n) for j in js]
    report = uce_check(family, K, js, grid, **kw)
    spec = spectral.classify_expanding(a)
    report.bounds_used["classification"] = spec.classification.value
    expanding = spec.classification is not spectral.Classification.NOT_EXPANDING_ON_SUBSPACE
    bounded = report.verdict is not Verdict.GROWTH_EVIDENCE
    if expanding and not bounded:
        report.notes.append("inconsistent: expanding on a subspace but counts grow")
        report.verdict = Verdict.INCONCLUSIVE
    elif expanding:
        report.notes.append("consistent: expanding on a subspace and counts bounded")
    elif bounded:
        report.notes.append("counts bounded although the matrix is not expanding on a subspace; the implication is one-directional")
    else:
        report.notes.append("not expanding on a subspace and counts grow")
    return report


# ---------------------------------------------------------------------------
# composite diagnosis


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Diagnosis:
    system: str
    K: geo.Box
    reports: dict
    checks: list
    line_verdict: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "K": {"lo": [format_scalar(x) for x in self.K.lo], "hi": [format_scalar(x) for x in self.K.hi]},
            "reports": {k: v.to_dict() for k, v in self.reports.items()},
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "diagonal_equivalence": self.line_verdict,
        }

    @property
    def all_checks_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        out = [f"system: {self.system}"]
        out.append("summary:")
        for k, rep in self.reports.items():
            extra = f"   certified total {_cell(rep.certified_total)}" if rep.certified_total is not None else ""
            out.append(f"  {k:<10} total {_cell(rep.total):>22}   {rep.verdict.value}{extra}")
        out.append("implication checks:")
        for c in self.checks:
            out.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}  {c.detail}")
        if self.line_verdict:
            out.append(f"diagonal-family equivalence: {self.line_verdict}")
        return "\n".join(out)


def _bounded(rep: ConditionReport) -> bool:
    return rep.verdict in (Verdict.SATISFIED_AT_TRUNCATION, Verdict.BOUND_CERTIFIED)


def diagnose(s: GTISystem, K: geo.Box, jmax=None, grid: int = 8, singular_bound=None) -> Diagnosis:
    """Run every evaluator and check the implication chain per index."""
    lic = lic_partial(s, K, jmax=jmax)
    cal = calderon_partial(s, K, jmax=jmax)
    tem = temperate_partial(s, K, jmax=jmax)
    chosen = select_entries(s, None, jmax)
    family = [e.subgroup for _, e in chosen if e.subgroup.n > 0]
    labels = [e.label for _, e in chosen if e.subgroup.n > 0]
    reports = {"lic": lic, "calderon": cal, "temperate": tem}
    if family:
        reports["uce"] = uce_check(family, K, labels, grid)
    checks = []
    lower_ok, upper_ok = True, True
    worst = []
    for row_l, row_c, (_, e) in zip(lic.rows, cal.rows, chosen):
        if not le(row_c.term, row_l.term):
            lower_ok = False
            worst.append(e.label)
        if e.subgroup.n > 0:
            upper = lat.sup_count_upper(lat.annihilator(e.subgroup), K)
            bound = upper * prof.integrate(e.profile, K) / lat.covolume(e.subgroup)
            if not le(row_l.term, bound):
                upper_ok = False
                worst.append(e.label)
    checks.append(Check("lic term >= calderon term (alpha = 0)", lower_ok))
    checks.append(Check("lic term <= covol^-1 * certified count * integral", upper_ok, "" if upper_ok else f"labels {worst[:5]}"))
    checks.append(Check("partial sums nondecreasing", all(
        all(le(a, b) for a, b in zip(r.partial_sums, r.partial_sums[1:])) for r in (lic, cal, tem)
    )))
    line = None
    mats = [e.subgroup.C for _, e in chosen]
    if mats and all(linalg.is_diagonal(c) for c in mats):
        ratios = [spectral.singular_ratio(c) for c in mats]
        ok = growth_verdict(ratios).growth is False
        if singular_bound is not None:
            ok = ok and max(ratios) <= float(singular_bound) * (1 + 1e-9)
        if ok:
            lhs = _bounded(lic)
            rhs = _bounded(cal) and _bounded(tem)
            line = f"{'holds' if lhs == rhs else 'VIOLATED'} (lic bounded={lhs}, calderon and temperate bounded={rhs})"
            checks.append(Check("diagonal family: lic bounded iff calderon and temperate bounded", lhs == rhs))
        else:
            line = "not applicable (singular ratios unbounded)"
    return Diagnosis(s.name or "system", K, reports, checks, line)
