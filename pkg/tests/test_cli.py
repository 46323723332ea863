import json
import subprocess
import sys

import pytest

from chow_census.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_planar_json(capsys):
    code, out, _ = run(capsys, "count", "planar", "--d", "2", "--r", "3", "--q", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["value"] == 875
    assert doc["schema_version"] == 1 and doc["result"]["formula_id"]
    assert "timestamp" in doc


def test_no_timestamp_output_is_reproducible(capsys):
    argv = ["census", "classify", "--d", "2", "--q", "3", "--no-timestamp"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and a.endswith("\n") and "timestamp" not in a


def test_bounds_codim(capsys):
    code, out, _ = run(capsys, "bounds", "codim", "--d", "7", "--r", "3")
    res = json.loads(out)["result"]
    assert code == 0 and res["codim"] == 4 and res["u_table"] == {"1": 4, "2": 7, "3": 9}


def test_census_classify(capsys):
    code, out, _ = run(capsys, "census", "classify", "--d", "2", "--q", "2")
    counts = json.loads(out)["result"]["counts"]
    assert code == 0
    assert [counts[k]["value"] for k in ("FQ_REDUCIBLE", "RELATIVELY_IRREDUCIBLE", "ABSOLUTELY_IRREDUCIBLE")] == [28, 7, 28]


def test_verify_suites_and_exit_codes(capsys):
    assert run(capsys, "verify", "--suite", "lemma-counting")[0] == 0
    code, _, err = run(capsys, "verify", "--d", "99", "--r", "3", "--q", "2")
    assert code == 2 and "exceeds the cap" in err
    code, out, _ = run(capsys, "verify", "--suite", "weil", "--q", "5", "--d", "3", "--format", "text")
    assert code == 0 and out.startswith("PASS")


def test_validation_errors_exit_2(capsys):
    assert run(capsys, "count", "planar", "--d", "2", "--q", "2")[0] == 2
    assert run(capsys, "count", "bogus")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "count", "proj", "--r", "2", "--q", "6")[0] == 2
    assert run(capsys, "bounds", "codim", "--d", "3", "--r", "4")[0] == 2
    assert run(capsys, "census", "classify", "--d", "2", "--q", "2", "--workers", "0")[0] == 2


def test_csv_and_text_formats(capsys):
    code, out, _ = run(capsys, "census", "points", "--d", "2", "--q", "2", "--format", "csv")
    assert code == 0 and out.splitlines() == ["value,count", "1,7", "3,35", "5,21"]
    code, out, _ = run(capsys, "count", "smooth-conics", "--q", "5", "--format", "csv")
    assert "value,3100" in out.splitlines()
    code, out, _ = run(capsys, "bounds", "dims", "--d", "4", "--r", "3", "--format", "text")
    assert "lines.value: 16" in out and "planar.value: 17" in out


def test_form_file_commands(tmp_path, capsys):
    form = tmp_path / "conic.txt"
    form.write_text("2 3 2 : 1 1 0 1 0 0\n")
    code, out, _ = run(capsys, "census", "form", "--form-file", str(form))
    res = json.loads(out)["result"]
    assert code == 0 and res["class"].startswith("RELATIVELY_IRREDUCIBLE")
    chow = tmp_path / "line.txt"
    chow.write_text("3 1 2 : ((1,0,0,0),(0,1,0,0),(1)) ((0,1,0,0),(1,0,0,0),(1))\n")
    code, out, _ = run(capsys, "chow", "support", "--form-file", str(chow))
    res = json.loads(out)["result"]
    assert code == 0 and res["count"]["value"] == 3
    code, out, _ = run(capsys, "chow", "factor", "--form-file", str(chow))
    assert json.loads(out)["result"]["components"][0]["multiplicity"] == 1
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert run(capsys, "chow", "field", "--form-file", str(empty))[0] == 2
    assert run(capsys, "chow", "field", "--form-file", str(tmp_path / "missing.txt"))[0] == 2


def test_chow_line_and_output_file(tmp_path, capsys):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "chow", "line", "--points", "1,0,0,0;0,1,0,0", "--q", "2", "--output", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["result"]["chow_form"].startswith("3 1 2 :")


@pytest.mark.parametrize("argv", [
    ["bounds", "degree", "--d", "5", "--r", "3"],
    ["bounds", "rel-irr", "--d", "8", "--r", "3", "--q", "7"],
    ["bounds", "weil", "--d", "6", "--r", "3", "--q", "1000000"],
    ["bounds", "counts", "--d", "4", "--r", "3", "--q", "2"],
    ["bounds", "prob-reducible", "--d", "7", "--r", "3", "--q", "2"],
    ["bounds", "calc", "--kind", "BEZOUT", "--values", "3,5"],
    ["census", "sample", "--d", "2", "--q", "3", "--sample", "1000", "--seed", "1"],
    ["census", "planar", "--d", "2", "--r", "3", "--q", "2"],
    ["count", "grassmannian", "--k", "1", "--r", "3", "--q", "2"],
])
def test_other_commands_succeed(argv, capsys):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out)["schema_version"] == 1


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chow_census.cli", "count", "proj", "--r", "3", "--q", "2",
                           "--no-timestamp"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["value"] == 15
