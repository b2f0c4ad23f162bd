"""Command-line front end.

Exit codes: 0 for SATISFIED_AT_TRUNCATION / BOUND_CERTIFIED, 2 for
GROWTH_EVIDENCE, 3 for INCONCLUSIVE, 1 for invalid input.  With several test
sets the largest code wins.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from . import conditions as cond
from . import document as docmod
from . import geometry as geo
from . import lattice as lat
from . import linalg
from . import spectral
from . import systems
from .scalar import EPS_GEOM, format_scalar, is_exact, to_scalar

CONDITIONS = ("lic", "calderon", "temperate", "uce", "round", "lce")
EXAMPLES = ("main", "fail-uce", "wavelet", "compact-open")
DEFAULT_GRID = 16
DEFAULT_LCE_RANGE = (0, 10)


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_kbox(specs: Optional[list], dim: int) -> Optional[geo.Box]:
    """``["lo..hi", ...]`` (repeatable, comma-separated) into a box; one range is replicated."""
    if not specs:
        return None
    parts = [p for s in specs for p in s.split(",") if p.strip()]
    ranges = []
    for p in parts:
        if ".." not in p:
            raise UsageError(f"--kbox expects lo..hi, got {p!r}")
        lo, hi = p.split("..", 1)
        ranges.append((to_scalar(lo), to_scalar(hi)))
    if len(ranges) == 1:
        ranges = ranges * dim
    if len(ranges) != dim:
        raise UsageError(f"--kbox gave {len(ranges)} ranges for dimension {dim}")
    return geo.Box(tuple(r[0] for r in ranges), tuple(r[1] for r in ranges))


def parse_matrix(text: str) -> tuple:
    """``"2,0;0,2"`` rows, or a named matrix ``guo[:a]`` / ``remark:a``."""
    text = text.strip()
    name, _, arg = text.partition(":")
    if name == "guo":
        return spectral.guo_matrix(to_scalar(arg) if arg else 2)
    if name == "remark":
        if not arg:
            raise UsageError("remark matrix needs a parameter, e.g. remark:0.7071067811865476")
        return spectral.remark_matrix(to_scalar(arg))
    rows = [r for r in text.split(";") if r.strip()]
    if not rows:
        raise UsageError("empty matrix")
    return linalg.as_matrix([[to_scalar(x) for x in r.split(",")] for r in rows])


def parse_jrange(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        out = (int(lo), int(hi)) if sep else (0, int(lo))
    except ValueError:
        raise UsageError(f"--jrange expects lo..hi, got {text!r}") from None
    if out[0] > out[1]:
        raise UsageError("--jrange lo > hi")
    return out


def _floatify(m):
    return tuple(tuple(float(x) for x in row) for row in m)


def _load(args) -> Optional[docmod.SystemDocument]:
    force = getattr(args, "tol", None) == "float"
    if getattr(args, "input", None):
        return docmod.load(args.input, force_float=force)
    return None


def _param(args, doc, key, default=None):
    v = getattr(args, key, None)
    if v is not None:
        return v
    if doc is not None and key in doc.parameters:
        return doc.parameters[key]
    return default


def _thresholds(args, doc) -> dict:
    return {"slope_min": _param(args, doc, "slope_min", cond.SLOPE_MIN), "r2_min": _param(args, doc, "r2_min", cond.R2_MIN)}


def _header(command: str, mode: str, extra: dict) -> str:
    items = {"mode": mode, "eps_geom": EPS_GEOM, "eps_spec": spectral.EPS_SPEC, **extra}
    return f"# gticheck {command}  " + "  ".join(f"{k}={v}" for k, v in items.items() if v is not None)


def _emit(args, text: str, payload: dict, csv_text: Optional[str] = None):
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)
    if getattr(args, "csv", None) and csv_text is not None:
        if args.csv == "-":
            sys.stdout.write(csv_text)
        else:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(csv_text)


def _example_params(args) -> dict:
    out = {}
    for key, dest in (("a", "a"), ("N", "N"), ("r", "r")):
        v = getattr(args, dest, None)
        if v is not None:
            out[key] = to_scalar(v)
    for key, dest in (("n_max", "nmax"), ("j_max", "jmax"), ("j", "j"), ("j_abs", "jabs")):
        v = getattr(args, dest, None)
        if v is not None:
            out[key] = v
    if getattr(args, "literal", False):
        out["literal"] = True
    return out


def _system(args, doc):
    if getattr(args, "example", None):
        params = _example_params(args)
        if systems.ExampleSpec(args.example).name != "fail_uce":
            params.pop("j_max", None)
        return systems.build_example(args.example, **params)
    if doc is not None and doc.has_system():
        return doc.build_system()
    raise UsageError("no system: give an input document with a system or --example")


def _test_sets(args, doc, s) -> list:
    dim = s.dim if s is not None else (doc.dimension if doc else None)
    k = parse_kbox(args.kbox, dim) if args.kbox else None
    if k is not None:
        return [k]
    if doc is not None and doc.test_sets:
        return list(doc.test_sets)
    if s is not None:
        name = s.name if s.name in systems.EXAMPLE_NAMES else None
        return [systems.default_test_set(name, s) if name else s.working_box]
    return [geo.Box(tuple(Fraction(0) for _ in range(dim)), tuple(Fraction(1) for _ in range(dim)))]


def _subgroup(args, doc) -> lat.CoCompactSubgroup:
    if getattr(args, "matrix", None):
        m = parse_matrix(args.matrix)
        n = args.n if args.n is not None else len(m)
        return lat.make_subgroup(m, n)
    if doc is not None and doc.subgroup is not None:
        return doc.subgroup
    if doc is not None and doc.entries:
        return doc.entries[0].subgroup
    raise UsageError("no subgroup: give --matrix or a document with a 'subgroup'")


def _dilation(args, doc):
    if getattr(args, "matrix", None):
        m = parse_matrix(args.matrix)
    elif doc is not None and doc.matrix is not None:
        m = doc.matrix
    else:
        raise UsageError("no matrix: give --matrix or a document with 'matrix'")
    if getattr(args, "tol", None) == "float":
        m = _floatify(m)
    return m


# ---------------------------------------------------------------------------
# commands


def cmd_lattice_info(args) -> int:
    doc = _load(args)
    g = _subgroup(args, doc)
    if args.tol == "float":
        g = lat.make_subgroup(_floatify(g.C), g.n)
    covol = lat.covolume(g)
    out = {"subgroup": g.to_dict(), "covolume": format_scalar(covol)}
    lines = [_header("lattice-info", "exact" if is_exact(g.C) else "float", {"grid": args.grid or 8})]
    lines.append("C = " + "; ".join(", ".join(format_scalar(x) for x in row) for row in g.C) + f"   n = {g.n}")
    lines.append(f"covolume: {format_scalar(covol)}")
    if g.n == 0:
        lines.append("annihilator: {0}")
        out["annihilator"] = None
    else:
        dual = lat.annihilator(g)
        cols = linalg.columns(dual.basis)
        out["annihilator"] = {"basis_columns": [[format_scalar(x) for x in c] for c in cols], "weight": format_scalar(dual.weight)}
        lines.append("annihilator basis (columns): " + "  ".join("(" + ", ".join(format_scalar(x) for x in c) + ")" for c in cols))
        lines.append(f"annihilator weight: {format_scalar(dual.weight)}")
        if dual.exact and dual.rank == dual.dim:
            hnf = lat.canonical_basis(dual)
            out["annihilator"]["canonical"] = [[format_scalar(x) for x in row] for row in hnf]
            lines.append("annihilator canonical basis: " + "; ".join(", ".join(format_scalar(x) for x in row) for row in hnf))
        V = parse_kbox(args.kbox, g.dim) or geo.Box(tuple(Fraction(0) for _ in range(g.dim)), tuple(Fraction(1) for _ in range(g.dim)))
        sampled, arg = lat.sup_count_sampled(dual, V, args.grid or 8)
        upper = lat.sup_count_upper(dual, V)
        vdesc = " x ".join(f"[{format_scalar(l)},{format_scalar(h)}]" for l, h in zip(V.lo, V.hi))
        lines.append(f"spreadness of annihilator in V = {vdesc}: sampled >= {sampled} (at w = {tuple(format_scalar(x) for x in arg)}), certified <= {upper}")
        out["spreadness"] = {"window": {"lo": [format_scalar(x) for x in V.lo], "hi": [format_scalar(x) for x in V.hi]}, "sampled": sampled, "argmax": [format_scalar(x) for x in arg], "upper": upper}
    _emit(args, "\n".join(lines), out)
    return 0


def _run_condition(args, doc, condition: str, K, s, th):
    jmax = _param(args, doc, "jmax")
    grid = _param(args, doc, "grid", DEFAULT_GRID)
    if condition == "lic":
        return cond.lic_partial(s, K, jmax=jmax, **th)
    if condition == "calderon":
        return cond.calderon_partial(s, K, jmax=jmax, **th)
    if condition == "temperate":
        return cond.temperate_partial(s, K, jmax=jmax, **th)
    chosen = [e for _, e in cond.select_entries(s, None, jmax) if e.subgroup.n > 0]
    family, labels = [e.subgroup for e in chosen], [e.label for e in chosen]
    if not family:
        raise UsageError("no entry has a discrete part to count")
    if condition == "uce":
        cond.validate_test_set(s, K)
        return cond.uce_check(family, K, labels, grid, **th)
    radius = to_scalar(args.radius) if args.radius else (doc.radius if doc and doc.radius is not None else Fraction(1))
    return cond.round_family(family, radius, labels, grid, **th)


def cmd_check(args) -> int:
    doc = _load(args)
    th = _thresholds(args, doc)
    reports = []
    if args.condition == "lce":
        a = _dilation(args, doc)
        if doc is not None and doc.subgroup is not None:
            g = doc.subgroup
        else:
            g = lat.make_subgroup(linalg.identity(len(a)), len(a))
        radius = to_scalar(args.radius) if args.radius else (doc.radius if doc and doc.radius is not None else Fraction(1))
        jr = parse_jrange(args.jrange) if args.jrange else (doc.j_range if doc and doc.j_range else DEFAULT_LCE_RANGE)
        if args.tol == "float":
            radius = float(radius)
        reports.append(cond.lce_check(a, g, radius, range(jr[0], jr[1] + 1), **th))
        mode = reports[0].mode
    else:
        s = _system(args, doc)
        mode = "exact" if s.exact else "float"
        for K in _test_sets(args, doc, s):
            reports.append(_run_condition(args, doc, args.condition, K, s, th))
    for w in doc.warnings if doc else []:
        print(f"warning: {w}", file=sys.stderr)
    header = _header(f"check {args.condition}", mode, {
        "jmax": _param(args, doc, "jmax"), "grid": _param(args, doc, "grid", DEFAULT_GRID), **th,
    })
    text = "\n\n".join([header] + [r.render() for r in reports])
    payload = {"command": f"check {args.condition}", "mode": mode, "eps_geom": EPS_GEOM, "thresholds": th, "reports": [r.to_dict() for r in reports]}
    _emit(args, text, payload, "".join(r.to_csv() for r in reports))
    return max(r.exit_code for r in reports)


def cmd_classify(args) -> int:
    doc = _load(args)
    a = _dilation(args, doc)
    rep = spectral.classify_expanding(a)
    text = _header("classify", rep.certainty, {"cluster_tol": 1e-6}) + "\n" + rep.render()
    _emit(args, text, {"command": "classify", "matrix": spectral.describe_matrix(a), **rep.to_dict()})
    return 0


def cmd_example(args) -> int:
    name = systems.ExampleSpec(args.name).name
    params = _example_params(args)
    if args.grid is not None:
        params["grid"] = args.grid
    rows = systems.verification_table(name, **params)
    lines = [_header(f"example {args.name}", "exact", {k: (format_scalar(v) if isinstance(v, Fraction) else v) for k, v in params.items()})]
    payload = {"command": "example", "name": name, "parameters": {k: str(v) for k, v in params.items()}}
    if name != "compact_open":
        build = {k: v for k, v in params.items() if k != "grid"}
        s = systems.build_example(name, **build)
        K = systems.default_test_set(name, s)
        diag = cond.diagnose(s, K, grid=args.grid or 8)
        lines.append(diag.render())
        payload["diagnosis"] = diag.to_dict()
    width = max(len(r["quantity"]) for r in rows)
    lines.append("verification table:")
    for r in rows:
        comp = r["computed"]
        comp = cond._cell(comp) if not isinstance(comp, str) else comp
        lines.append(f"  [{'PASS' if r['passed'] else 'FAIL'}] {r['quantity']:<{width}}  computed {comp}   expected {r['reference']}")
    payload["table"] = [{**r, "computed": cond._json_scalar(r["computed"]) if not isinstance(r["computed"], str) else r["computed"]} for r in rows]
    if name == "compact_open":
        j = params.get("j", 7)
        count, covol, covol_h = systems.compact_open_counts(j)
        lines.append(f"({count}, {format_scalar(covol)}, {format_scalar(covol_h)})")
        payload["counts"] = [count, format_scalar(covol), format_scalar(covol_h)]
    _emit(args, "\n".join(lines), payload)
    return 0 if all(r["passed"] for r in rows) else 3


def cmd_enumerate(args) -> int:
    doc = _load(args)
    g = _subgroup(args, doc)
    if g.n == 0:
        raise UsageError("subgroup has no discrete part")
    L = lat.annihilator(g) if args.dual else g.lattice_part()
    region = parse_kbox(args.kbox, g.dim)
    if region is None:
        if doc is not None and doc.test_sets:
            region = doc.test_sets[0]
        else:
            raise UsageError("enumerate needs --kbox or a document test set")
    pts = lat.enumerate_in_region(L, region, reduce=args.reduce)
    if args.json:
        print(json.dumps({"count": len(pts), "points": [{"m": list(m), "x": [format_scalar(x) for x in p]} for m, p in pts]}, indent=2))
    else:
        text = lat.points_to_csv(pts)
        if args.csv and args.csv != "-":
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            print(f"{len(pts)} points written to {args.csv}")
        else:
            sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, input_required: bool = False):
    p.add_argument("input", nargs=None if input_required else "?", help="gti-doc/1 JSON document")
    p.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    p.add_argument("--tol", choices=("exact", "float"), default=None, help="arithmetic mode; default inferred from the input (float wins)")
    p.add_argument("--grid", type=int, default=None, help=f"samples per axis for sampled suprema (default {DEFAULT_GRID}; 8 for lattice-info and example)")
    p.add_argument("--kbox", action="append", metavar="LO..HI", help="test set, one range per axis (repeat or comma-separate); a single range is used on every axis")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gticheck", description="Check integrability and counting conditions for translation-invariant systems on R^d.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice-info", help="covolume, annihilator and spreadness of a subgroup")
    _common(p)
    p.add_argument("--matrix", help="subgroup matrix C as 'a,b;c,d'")
    p.add_argument("--n", type=int, default=None, help="split rank (default: full)")
    p.set_defaults(func=cmd_lattice_info)

    p = sub.add_parser("check", help="evaluate one condition at truncation")
    p.add_argument("condition", choices=CONDITIONS)
    _common(p)
    p.add_argument("--example", choices=EXAMPLES + ("main_example", "fail_uce", "compact_open"), help="use a built-in example system")
    p.add_argument("--jmax", type=int, default=None, help="largest entry label to include (default: all); example size for fail-uce")
    p.add_argument("--csv", metavar="PATH", help="write per-index rows as CSV ('-' for stdout)")
    p.add_argument("--matrix", help="dilation matrix for lce: 'a,b;c,d', 'guo[:a]' or 'remark:a'")
    p.add_argument("--radius", help="ball radius for round and lce (default 1)")
    p.add_argument("--jrange", help=f"j range for lce as lo..hi (default {DEFAULT_LCE_RANGE[0]}..{DEFAULT_LCE_RANGE[1]})")
    p.add_argument("--slope-min", dest="slope_min", type=float, default=None, help=f"growth slope threshold (default {cond.SLOPE_MIN})")
    p.add_argument("--r2-min", dest="r2_min", type=float, default=None, help=f"growth fit threshold (default {cond.R2_MIN})")
    _overrides(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="spectral classification of a dilation matrix")
    _common(p)
    p.add_argument("--matrix", help="'a,b;c,d', 'guo[:a]' or 'remark:a'")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("example", help="build a worked example, diagnose it and print its verification table")
    p.add_argument("name", choices=EXAMPLES + ("main_example", "fail_uce", "compact_open"))
    p.add_argument("--json", action="store_true")
    p.add_argument("--grid", type=int, default=None, help="sampling grid (default 8 for the diagnosis; per-example defaults for the table)")
    p.add_argument("--jmax", type=int, default=None, help="fail-uce: number of entries (default 40)")
    _overrides(p)
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("enumerate", help="list lattice points in a box as CSV")
    _common(p)
    p.add_argument("--matrix", help="subgroup matrix C as 'a,b;c,d'")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--dual", action="store_true", help="enumerate the annihilator instead of the lattice part")
    p.add_argument("--reduce", action="store_true", help="LLL-reduce the basis first")
    p.add_argument("--csv", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_enumerate)
    return parser


def _overrides(p):
    p.add_argument("--a", help="main example parameter a (default 1/20)")
    p.add_argument("--N", help="fail-uce decay base N (default 2)")
    p.add_argument("--r", help="fail-uce support half-width r (default 1)")
    p.add_argument("--nmax", type=int, default=None, help="main example: materialised squares (default 8)")
    p.add_argument("--j", type=int, default=None, help="compact-open index j (default 7)")
    p.add_argument("--jabs", type=int, default=None, help="wavelet: |j| range (default 10)")
    p.add_argument("--literal", action="store_true", help="main example: use the alternative sign pattern of C_j")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except docmod.DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
