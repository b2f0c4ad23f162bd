"""Versioned JSON input documents for the command-line front end.

Schema ``gti-doc/1``::

    {
      "version": "gti-doc/1",
      "dimension": 2,
      "system": {"example": "fail_uce", "params": {"N": "2", "j_max": 40}}
             | {"entries": [{"label": 1, "C": [[..]], "n": 2, "profile": [..]}],
                "working_box": {"lo": [..], "hi": [..]},
                "tails": {"lic": {"kind": "geometric", "ratio": "1/2", "coefficient": "4"}},
                "excluded": [{"lo": [..], "hi": [..]}]},
      "subgroup": {"C": [[..]], "n": 2},
      "matrix": [[..]],
      "radius": "1",
      "j_range": [0, 10],
      "test_sets": [{"lo": [..], "hi": [..]}],
      "parameters": {"jmax": 40, "grid": 16, "tol": "exact", "slope_min": 0.5, "r2_min": 0.9}
    }

Every key except ``version`` and ``dimension`` is optional.  Scalars are
``"p/q"`` strings or integers (exact) or decimal literals (float).  A document
mixing both is read entirely in float mode and a warning is recorded.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import conditions as cond
from . import geometry as geo
from . import lattice as lat
from . import linalg
from . import profiles as prof
from . import systems
from .scalar import ScalarParseError, format_scalar, to_scalar

SCHEMA_VERSION = "gti-doc/1"
TAIL_CONDITIONS = ("lic", "calderon", "temperate")
_PARAM_KEYS = {"jmax": int, "grid": int, "tol": str, "slope_min": float, "r2_min": float}
_EXAMPLE_INT = ("n_max", "j_max", "j_abs", "j", "grid")
_EXAMPLE_SCALAR = ("a", "N", "r")


class DocumentError(ValueError):
    """Parse or validation failure with a JSON path and, when known, a line."""

    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(f"field {path}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class SystemDocument:
    dimension: int
    example: Optional[str] = None
    example_params: dict = field(default_factory=dict)
    entries: tuple = ()
    working_box: Optional[geo.Box] = None
    tails: dict = field(default_factory=dict)
    excluded: tuple = ()
    test_sets: tuple = ()
    parameters: dict = field(default_factory=dict)
    subgroup: Optional[lat.CoCompactSubgroup] = None
    matrix: Optional[tuple] = None
    radius: Optional[object] = None
    j_range: Optional[tuple] = None
    mode: str = "exact"
    version: str = SCHEMA_VERSION
    warnings: list = field(default_factory=list, compare=False)

    def build_system(self) -> cond.GTISystem:
        if self.example is not None:
            if systems.ExampleSpec(self.example).name == "compact_open":
                raise DocumentError("compact_open has no GTI system; use the example command", "system.example")
            return systems.build_example(self.example, **self.example_params)
        if not self.entries:
            raise DocumentError("document has no system", "system")
        return cond.GTISystem(self.entries, self.working_box, dict(self.tails), self.excluded, "document")

    def has_system(self) -> bool:
        return self.example is not None or bool(self.entries)

    def to_dict(self) -> dict:
        out: dict = {"version": self.version, "dimension": self.dimension}
        if self.example is not None:
            out["system"] = {"example": self.example, "params": {k: _dump_param(v) for k, v in self.example_params.items()}}
        elif self.entries:
            out["system"] = {
                "entries": [
                    {"label": e.label, **e.subgroup.to_dict(), "profile": prof.profile_to_dict(e.profile)} for e in self.entries
                ],
                "working_box": _box_out(self.working_box),
                "tails": {k: t.to_dict() for k, t in self.tails.items()},
                "excluded": [_box_out(b) for b in self.excluded],
            }
        if self.subgroup is not None:
            out["subgroup"] = self.subgroup.to_dict()
        if self.matrix is not None:
            out["matrix"] = [[_dump_scalar(x) for x in row] for row in self.matrix]
        if self.radius is not None:
            out["radius"] = _dump_scalar(self.radius)
        if self.j_range is not None:
            out["j_range"] = list(self.j_range)
        if self.test_sets:
            out["test_sets"] = [_box_out(b) for b in self.test_sets]
        if self.parameters:
            out["parameters"] = dict(self.parameters)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _dump_scalar(x):
    # floats stay JSON numbers so they re-parse as floats
    return float(x) if isinstance(x, float) else format_scalar(x)


def _dump_param(v):
    if isinstance(v, bool) or isinstance(v, int):
        return v
    return _dump_scalar(v)


def _box_out(b: Optional[geo.Box]):
    if b is None:
        return None
    return {"lo": [_dump_scalar(x) for x in b.lo], "hi": [_dump_scalar(x) for x in b.hi]}


# ---------------------------------------------------------------------------
# parsing


class _Reader:
    def __init__(self, text: str, force_float: bool):
        self.text = text
        self.force_float = force_float
        self.kinds: set = set()

    def fail(self, message: str, path: str):
        raise DocumentError(message, path, _locate(self.text, path))

    def scalar(self, value, path: str):
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            self.fail(f"expected a scalar, got {type(value).__name__}", path)
        try:
            x = to_scalar(value)
        except ScalarParseError as exc:
            self.fail(str(exc), path)
        self.kinds.add("exact" if isinstance(x, Fraction) else "float")
        return float(x) if self.force_float else x

    def integer(self, value, path: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail("expected an integer", path)
        return value

    def vector(self, value, path: str, dim: Optional[int] = None) -> tuple:
        if not isinstance(value, list):
            self.fail("expected a list of scalars", path)
        if dim is not None and len(value) != dim:
            self.fail(f"expected {dim} components, got {len(value)}", path)
        return tuple(self.scalar(x, f"{path}[{i}]") for i, x in enumerate(value))

    def matrix(self, value, path: str, dim: Optional[int] = None) -> tuple:
        if not isinstance(value, list) or not value:
            self.fail("expected a non-empty list of rows", path)
        rows = [self.vector(r, f"{path}[{i}]", dim) for i, r in enumerate(value)]
        if len({len(r) for r in rows}) != 1:
            self.fail("rows have different lengths", path)
        if dim is not None and len(rows) != dim:
            self.fail(f"expected a {dim}x{dim} matrix", path)
        return tuple(rows)

    def box(self, value, path: str, dim: int) -> geo.Box:
        if not isinstance(value, dict) or "lo" not in value or "hi" not in value:
            self.fail("expected a box {lo: [...], hi: [...]}", path)
        lo = self.vector(value["lo"], f"{path}.lo", dim)
        hi = self.vector(value["hi"], f"{path}.hi", dim)
        try:
            return geo.Box(lo, hi)
        except (ValueError, geo.GeometryError) as exc:
            self.fail(str(exc), path)

    def subgroup(self, value, path: str, dim: int) -> lat.CoCompactSubgroup:
        if not isinstance(value, dict) or "C" not in value:
            self.fail("expected a subgroup {C: [[...]], n: int}", path)
        C = self.matrix(value["C"], f"{path}.C", dim)
        n = self.integer(value.get("n", dim), f"{path}.n")
        try:
            return lat.make_subgroup(C, n)
        except (ValueError, linalg.SingularMatrixError) as exc:
            self.fail(str(exc), path)

    def profile(self, value, path: str, dim: int) -> prof.EnergyProfile:
        if not isinstance(value, list):
            self.fail("expected a list of profile pieces", path)
        pieces = []
        for i, item in enumerate(value):
            p = f"{path}[{i}]"
            if not isinstance(item, dict) or "value" not in item:
                self.fail("profile piece needs a body and a value", p)
            if "box" in item:
                body = self.box(item["box"], f"{p}.box", dim)
            elif "polytope" in item:
                hs = []
                for k, h in enumerate(item["polytope"]):
                    hp = f"{p}.polytope[{k}]"
                    if not isinstance(h, dict) or "normal" not in h or "offset" not in h:
                        self.fail("halfspace needs normal and offset", hp)
                    hs.append((self.vector(h["normal"], f"{hp}.normal", dim), self.scalar(h["offset"], f"{hp}.offset")))
                try:
                    body = geo.make_polytope(hs)
                except (ValueError, geo.GeometryError) as exc:
                    self.fail(str(exc), f"{p}.polytope")
                if body is None:
                    self.fail("empty polytope", f"{p}.polytope")
            else:
                self.fail("profile piece needs a 'box' or 'polytope' key", p)
            pieces.append((body, self.scalar(item["value"], f"{p}.value")))
        try:
            return prof.make_profile(pieces)
        except (ValueError, geo.GeometryError) as exc:
            self.fail(str(exc), path)

    def tail(self, value, path: str) -> prof.TailDescriptor:
        if not isinstance(value, dict):
            self.fail("expected a tail descriptor object", path)
        kind = value.get("kind", "none")
        try:
            if kind == "geometric":
                return prof.TailDescriptor("geometric", self.scalar(value.get("ratio"), f"{path}.ratio"), self.scalar(value.get("coefficient"), f"{path}.coefficient"))
            if kind == "user":
                return prof.TailDescriptor("user", constant=self.scalar(value.get("bound"), f"{path}.bound"))
            if kind == "none":
                return prof.NO_TAIL
        except prof.ProfileError as exc:
            self.fail(str(exc), path)
        self.fail(f"unknown tail kind {kind!r}", f"{path}.kind")


def _locate(text: str, path: str) -> Optional[int]:
    """Best-effort line of ``path`` in ``text``: follow the keys in order."""
    pos = 0
    found = None
    for key in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", path):
        m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, pos)
        if m is None:
            break
        pos = m.start()
        found = text.count("\n", 0, pos) + 1
    return found


def _parse(data, text: str, force_float: bool) -> tuple[SystemDocument, set]:
    r = _Reader(text, force_float)
    if not isinstance(data, dict):
        r.fail("document must be a JSON object", "")
    allowed = {"version", "dimension", "system", "subgroup", "matrix", "radius", "j_range", "test_sets", "parameters"}
    for key in data:
        if key not in allowed:
            r.fail(f"unknown key {key!r}", key)
    version = data.get("version")
    if version != SCHEMA_VERSION:
        r.fail(f"unsupported version {version!r}; expected {SCHEMA_VERSION!r}", "version")
    dim = r.integer(data.get("dimension"), "dimension")
    if not 1 <= dim <= lat.MAX_DIM:
        r.fail(f"dimension must be in [1, {lat.MAX_DIM}]", "dimension")
    doc = SystemDocument(dim)

    sysd = data.get("system")
    if sysd is not None:
        if not isinstance(sysd, dict):
            r.fail("system must be an object", "system")
        if "example" in sysd:
            name = sysd["example"]
            try:
                doc.example = systems.ExampleSpec(str(name)).name
            except systems.ParameterError as exc:
                r.fail(str(exc), "system.example")
            params = sysd.get("params", {})
            if not isinstance(params, dict):
                r.fail("params must be an object", "system.params")
            for k, v in params.items():
                p = f"system.params.{k}"
                if k == "literal":
                    if not isinstance(v, bool):
                        r.fail("expected true or false", p)
                    doc.example_params[k] = v
                elif k in _EXAMPLE_INT:
                    doc.example_params[k] = r.integer(v, p)
                elif k in _EXAMPLE_SCALAR:
                    doc.example_params[k] = r.scalar(v, p)
                else:
                    r.fail(f"unknown example parameter {k!r}", p)
            try:
                systems.ExampleSpec(doc.example, dict(doc.example_params))
            except systems.ParameterError as exc:
                r.fail(str(exc), "system.params")
        else:
            raw = sysd.get("entries")
            if not isinstance(raw, list) or not raw:
                r.fail("system needs 'example' or a non-empty 'entries' list", "system.entries")
            if "working_box" not in sysd:
                r.fail("explicit systems need a working_box", "system.working_box")
            doc.working_box = r.box(sysd["working_box"], "system.working_box", dim)
            entries = []
            for i, e in enumerate(raw):
                p = f"system.entries[{i}]"
                if not isinstance(e, dict):
                    r.fail("entry must be an object", p)
                label = r.integer(e.get("label", i + 1), f"{p}.label")
                g = r.subgroup(e, p, dim)
                pr = r.profile(e.get("profile", []), f"{p}.profile", dim)
                entries.append(cond.SystemEntry(label, g, pr))
            doc.entries = tuple(entries)
            tails = sysd.get("tails", {})
            if not isinstance(tails, dict):
                r.fail("tails must be an object", "system.tails")
            for k, v in tails.items():
                if k not in TAIL_CONDITIONS:
                    r.fail(f"tails apply to {', '.join(TAIL_CONDITIONS)}", f"system.tails.{k}")
                doc.tails[k] = r.tail(v, f"system.tails.{k}")
            doc.excluded = tuple(r.box(b, f"system.excluded[{i}]", dim) for i, b in enumerate(sysd.get("excluded", [])))
            try:
                doc.build_system()
            except (cond.ValidationError, geo.GeometryError) as exc:
                r.fail(str(exc), "system")

    if "subgroup" in data:
        doc.subgroup = r.subgroup(data["subgroup"], "subgroup", dim)
    if "matrix" in data:
        doc.matrix = r.matrix(data["matrix"], "matrix", dim)
    if "radius" in data:
        doc.radius = r.scalar(data["radius"], "radius")
        if not doc.radius > 0:
            r.fail("radius must be positive", "radius")
    if "j_range" in data:
        jr = data["j_range"]
        if not isinstance(jr, list) or len(jr) != 2:
            r.fail("j_range must be [lo, hi]", "j_range")
        lo, hi = r.integer(jr[0], "j_range[0]"), r.integer(jr[1], "j_range[1]")
        if lo > hi:
            r.fail("j_range lo > hi", "j_range")
        doc.j_range = (lo, hi)
    ts = data.get("test_sets", [])
    if not isinstance(ts, list):
        r.fail("test_sets must be a list of boxes", "test_sets")
    doc.test_sets = tuple(r.box(b, f"test_sets[{i}]", dim) for i, b in enumerate(ts))
    params = data.get("parameters", {})
    if not isinstance(params, dict):
        r.fail("parameters must be an object", "parameters")
    for k, v in params.items():
        kind = _PARAM_KEYS.get(k)
        p = f"parameters.{k}"
        if kind is None:
            r.fail(f"unknown parameter {k!r}", p)
        if kind is int:
            doc.parameters[k] = r.integer(v, p)
        elif kind is float:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                r.fail("expected a number", p)
            doc.parameters[k] = v
        else:
            if v not in ("exact", "float"):
                r.fail("tol must be 'exact' or 'float'", p)
            doc.parameters[k] = v
    return doc, r.kinds


def loads(text: str, force_float: bool = False) -> SystemDocument:
    """Parse a document; mixed exact/float scalars switch the whole document to float."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg} (column {exc.colno})", line=exc.lineno) from None
    want_float = force_float or (isinstance(data, dict) and isinstance(data.get("parameters"), dict) and data["parameters"].get("tol") == "float")
    doc, kinds = _parse(data, text, want_float)
    warnings = []
    if not want_float and kinds == {"exact", "float"}:
        if isinstance(data.get("parameters"), dict) and data["parameters"].get("tol") == "exact":
            raise DocumentError("tol is 'exact' but the document contains float scalars", "parameters.tol", _locate(text, "parameters.tol"))
        doc, kinds = _parse(data, text, True)
        warnings.append("document mixes rational and float scalars; reading everything in float mode")
    doc.mode = "float" if "float" in kinds or want_float else "exact"
    doc.warnings = warnings
    return doc


def load(path: str, force_float: bool = False) -> SystemDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, force_float)


__all__ = ["SCHEMA_VERSION", "DocumentError", "SystemDocument", "load", "loads"]
