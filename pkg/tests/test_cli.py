import json
import subprocess
import sys
from pathlib import Path

import pytest

from gticheck.cli import main, parse_kbox, parse_matrix
from gticheck import geometry as geo
from gticheck.cli import UsageError

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lattice_info_z2(capsys):
    code, out, _ = run(capsys, "lattice-info", str(SAMPLES / "z2.json"))
    assert code == 0
    assert "covolume: 1" in out
    assert "annihilator basis (columns): (1, 0)  (0, 1)" in out


def test_lattice_info_diag_json(capsys):
    code, out, _ = run(capsys, "lattice-info", "--matrix", "1/3,0;0,3", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["covolume"] == "1"
    assert data["annihilator"]["basis_columns"] == [["3", "0"], ["0", "1/3"]]


def test_malformed_matrix_exits_1(capsys):
    code, _, err = run(capsys, "lattice-info", "--matrix", "1,0;0,zz")
    assert code == 1 and "error" in err


def test_malformed_document_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": "gti-doc/1", "dimension": 2, "subgroup": {"C": [["1"], ["0", "1"]]}}')
    code, _, err = run(capsys, "lattice-info", str(bad))
    assert code == 1 and "field subgroup.C" in err


def test_check_uce_fail_uce_exits_2(capsys):
    code, out, _ = run(capsys, "check", "uce", "--example", "fail-uce", "--jmax", "30", "--grid", "4", "--kbox", "0..1")
    assert code == 2 and "GROWTH_EVIDENCE" in out


def test_check_lic_fail_uce_exits_0(capsys):
    code, out, _ = run(capsys, "check", "lic", "--example", "fail-uce")
    assert code == 0 and "BOUND_CERTIFIED" in out


def test_check_temperate_main_exits_2(capsys):
    code, out, _ = run(capsys, "check", "temperate", "--example", "main")
    assert code == 2
    assert "total at truncation: 9" in out


def test_check_json_and_csv(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "check", "calderon", str(SAMPLES / "two_entries.json"), "--json", "--csv", str(path))
    data = json.loads(out)
    assert code == 0
    assert data["reports"][0]["verdict"] == "BOUND_CERTIFIED"
    assert path.read_text().splitlines()[0].startswith("label,k,term,partial")


def test_check_header_states_mode_and_thresholds(capsys):
    _, out, _ = run(capsys, "check", "calderon", str(SAMPLES / "two_entries.json"))
    head = out.splitlines()[0]
    assert "mode=exact" in head and "eps_geom=1e-09" in head and "slope_min=0.5" in head


def test_check_kbox_outside_working_box_exits_1(capsys):
    code, _, err = run(capsys, "check", "lic", "--example", "fail-uce", "--kbox", "0..3")
    assert code == 1 and "working box" in err


def test_check_lce_from_document(capsys):
    code, out, err = run(capsys, "check", "lce", str(SAMPLES / "remark_lce.json"), "--jrange", "1..10")
    assert code in (0, 2)
    assert "mode: float" in out
    assert "warning" in err


def test_check_round(capsys):
    code, out, _ = run(capsys, "check", "round", "--example", "fail-uce", "--jmax", "6", "--grid", "4", "--kbox", "0..1")
    assert code in (0, 2) and "condition: round" in out


@pytest.mark.parametrize(
    "matrix, label",
    [("2,0;0,2", "Expanding "), ("guo", "NotExpandingOnSubspace"), ("1,0;0,2", "ExpandingOnSubspaceOnly")],
)
def test_classify(capsys, matrix, label):
    code, out, _ = run(capsys, "classify", "--matrix", matrix)
    assert code == 0
    assert f"classification: {label}" in out


def test_classify_singular_exits_1(capsys):
    code, _, err = run(capsys, "classify", "--matrix", "1,2;2,4")
    assert code == 1 and "singular" in err


def test_example_main(capsys):
    code, out, _ = run(capsys, "example", "main")
    assert code == 0
    assert "temperate  total                      9   GROWTH_EVIDENCE" in out
    assert "FAIL" not in out


def test_example_fail_uce(capsys):
    code, out, _ = run(capsys, "example", "fail-uce", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["diagnosis"]["reports"]["uce"]["verdict"] == "GROWTH_EVIDENCE"
    assert data["diagnosis"]["reports"]["lic"]["verdict"] == "BOUND_CERTIFIED"


def test_example_compact_open(capsys):
    code, out, _ = run(capsys, "example", "compact-open", "--j", "7")
    assert code == 0
    assert "(7, 1, 1/7)" in out


def test_unknown_example_exits_nonzero():
    with pytest.raises(SystemExit) as err:
        main(["example", "nope"])
    assert err.value.code != 0


def test_enumerate_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "--matrix", "1,0;0,1", "--kbox", "0..1")
    assert code == 0
    assert out.splitlines() == ["m1,m2,x1,x2", "0,0,0,0", "0,1,0,1", "1,0,1,0", "1,1,1,1"]


def test_parse_kbox():
    assert parse_kbox(["0..1"], 2) == geo.Box((0, 0), (1, 1))
    assert parse_kbox(["0..1,-1/2..2"], 2) == geo.Box((0, -0.5), (1, 2))
    assert parse_kbox(["0..1", "2..3"], 2) == geo.Box((0, 2), (1, 3))
    with pytest.raises(UsageError):
        parse_kbox(["0..1", "0..1"], 3)


def test_parse_matrix_named():
    assert parse_matrix("guo") == ((2, 0, 0), (0, 1, 1), (0, 0, 1))
    assert len(parse_matrix("remark:7/10")) == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gticheck", "example", "compact-open", "--j", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and "(3, 1, 1/3)" in res.stdout
