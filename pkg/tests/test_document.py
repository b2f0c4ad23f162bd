import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from gticheck import document as docmod

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def doc_text(**extra):
    base = {"version": "gti-doc/1", "dimension": 2, "subgroup": {"C": [["1/3", "0"], ["0", "3"]], "n": 2}}
    base.update(extra)
    return json.dumps(base, indent=2)


@pytest.mark.parametrize("name", sorted(p.name for p in SAMPLES.glob("*.json")))
def test_samples_round_trip(name):
    doc = docmod.load(str(SAMPLES / name))
    again = docmod.loads(doc.dumps())
    assert again == doc
    assert again.dumps() == doc.dumps()


def test_exact_scalars():
    doc = docmod.loads(doc_text())
    assert doc.mode == "exact"
    assert doc.subgroup.C[0][0] == F(1, 3)


def test_mixed_scalars_force_float_with_warning():
    doc = docmod.loads(doc_text(radius=0.5))
    assert doc.mode == "float"
    assert doc.warnings
    assert isinstance(doc.subgroup.C[0][0], float)
    assert docmod.loads(doc.dumps()) == doc


def test_tol_exact_conflicts_with_floats():
    with pytest.raises(docmod.DocumentError, match="tol"):
        docmod.loads(doc_text(radius=0.5, parameters={"tol": "exact"}))


def test_force_float():
    doc = docmod.loads(doc_text(), force_float=True)
    assert doc.mode == "float" and not doc.warnings


def test_version_checked():
    with pytest.raises(docmod.DocumentError, match="version"):
        docmod.loads(doc_text(version="gti-doc/0"))


def test_bad_scalar_reports_field_and_line():
    text = doc_text(subgroup={"C": [["1", "0"], ["0", "x"]], "n": 2})
    with pytest.raises(docmod.DocumentError) as err:
        docmod.loads(text)
    assert err.value.path == "subgroup.C[1][1]"
    assert err.value.line is not None and err.value.line > 1


def test_json_syntax_error_reports_line():
    with pytest.raises(docmod.DocumentError) as err:
        docmod.loads('{"version": "gti-doc/1",\n "dimension": 2,\n')
    assert err.value.line == 3


def test_wrong_shape_matrix():
    with pytest.raises(docmod.DocumentError, match="components"):
        docmod.loads(doc_text(matrix=[["1", "2", "3"], ["1", "2", "3"]]))


def test_singular_subgroup():
    with pytest.raises(docmod.DocumentError, match="singular"):
        docmod.loads(doc_text(subgroup={"C": [["1", "2"], ["2", "4"]], "n": 2}))


def test_unknown_key():
    with pytest.raises(docmod.DocumentError, match="unknown key"):
        docmod.loads(doc_text(colour="red"))


def test_example_system_document():
    doc = docmod.loads(doc_text(system={"example": "fail-uce", "params": {"N": "3", "j_max": 4}}))
    assert doc.example == "fail_uce"
    s = doc.build_system()
    assert len(s.entries) == 4
    assert s.entries[0].profile.value_at((0, 0)) == F(1, 3)


def test_example_parameter_validated():
    with pytest.raises(docmod.DocumentError, match="a < 1/10"):
        docmod.loads(doc_text(system={"example": "main", "params": {"a": "1/2"}}))


def test_explicit_entries_outside_working_box():
    system = {
        "entries": [{"label": 1, "C": [["1", "0"], ["0", "1"]], "n": 2, "profile": [{"box": {"lo": ["0", "0"], "hi": ["2", "2"]}, "value": "1"}]}],
        "working_box": {"lo": ["0", "0"], "hi": ["1", "1"]},
    }
    with pytest.raises(docmod.DocumentError, match="working box"):
        docmod.loads(doc_text(system=system))
