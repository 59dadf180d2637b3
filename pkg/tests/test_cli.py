from __future__ import annotations

import json

import pytest

from ietmorph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_classify_json(capsys):
    code, out = run(capsys, "iet", "classify", "--params", "1,sqrt2,2")
    data = json.loads(out)
    assert code == 0
    assert (data["class"], data["K"], data["L"]) == ("Degenerate", -1, 2)
    assert data["config"]["seed"] == 0 and data["config"]["command"] == "iet classify"


def test_code_window(capsys):
    code, out = run(capsys, "iet", "code", "--params", "1,sqrt2,sqrt2", "--x0", "1/2", "--range=-3:9", "--points")
    data = json.loads(out)
    assert code == 0 and data["word"].index("|") == 3 and len(data["points"]) == 13
    assert data["word"].split("|")[1] == "ACACBBBCACAC"[:10]


def test_approx_inputs(capsys):
    code, out = run(capsys, "iet", "code", "--params", "1,1.41421356237,1.41421356237", "--approx", "--range", "0:9")
    assert code == 0 and json.loads(out)["approximate"] is True


def test_usage_and_domain_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["iet", "classify"])
    assert exc.value.code == 64
    code, out = run(capsys, "iet", "classify", "--params", "1,foo,2")
    assert code == 64 and json.loads(out)["error"] == "ParseError"
    code, out = run(capsys, "iet", "classify", "--params", "1,-1,2")
    assert code == 65 and json.loads(out)["error"] == "OutOfDomain"
    code, out = run(capsys, "monoid", "enum", "--bound", "9")
    assert code == 65 and json.loads(out)["error"] == "BoundTooLarge"


def test_preserve_exit_codes(capsys):
    args = ["--trials", "2", "--window", "3000", "--flen", "8"]
    code, out = run(capsys, "preserve", "test", "--morphism", "A->AC;B->BC;C->C", *args)
    assert code == 0 and json.loads(out)["verdict"] == "Consistent"
    code, out = run(capsys, "preserve", "test", "--morphism", "A->AB;B->BC;C->C", *args)
    assert code == 2 and json.loads(out)["witness"] == "AB"


def test_monoid_outputs(capsys):
    code, out = run(capsys, "monoid", "check", "--matrix", "0,2,1;2,3,5;3,0,5")
    data = json.loads(out)
    assert code == 0 and data["report"]["e3n_member"] and data["spectrum"]["quadratic_factor"] == "x^2-7x+1"
    code, out = run(capsys, "monoid", "enum", "--bound", "1", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "m11,m12,m13,m21,m22,m23,m31,m32,m33,det,symplectic_sign,delta"
    assert len(lines) == 7 and "1,0,0,0,1,0,0,0,1,1,1,1" in lines


def test_capset_csv_to_file(tmp_path, capsys):
    target = tmp_path / "cap.csv"
    code, out = run(capsys, "capset", "gen", "--params", "1,sqrt2,sqrt2", "--range", "0:20", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "n,t_n,t_n_float,gap" and lines[1].startswith("0,0,0")


def test_capset_checks(capsys):
    code, out = run(capsys, "capset", "dualcheck", "--eps", "sqrt2/3", "--eta", "(1+sqrt2)/5", "--omega1", "(0,3]", "--omega2", "[-1,2)")
    assert json.loads(out)["equal"]
    code, out = run(capsys, "capset", "renorm", "--eps", "sqrt2/4", "--eta", "sqrt2/8", "--form", "printed")
    assert json.loads(out)["holds"] is False
    code, out = run(capsys, "capset", "scale", "--eps", "sqrt2-1", "--lam", "3-2*sqrt2")
    assert json.loads(out)["holds"] is True
    code, out = run(capsys, "capset", "selfsim", "--morphism", "0->10;1->110", "--format", "svg", "--gaps", "40")
    assert code == 0 and out.startswith("<svg")


def test_word_and_morph(capsys):
    code, out = run(capsys, "word", "complexity", "--word", "ABCABC", "--nmax", "2", "--format", "csv")
    assert out == "n,complexity\n1,3\n2,3\n"
    code, out = run(capsys, "word", "balance", "--word", "0011")
    assert json.loads(out)["balance_defect"] == 2
    code, out = run(capsys, "morph", "apply", "--morphism", "A->B;B->BCB;C->CAC", "--word", "A|C")
    assert json.loads(out)["word"] == "B|CAC"
    code, out = run(capsys, "morph", "info", "--morphism", "A->B;B->BCB;C->CAC")
    data = json.loads(out)
    assert data["primitive"] and data["perron"]["value"] == "3/2+1/2*sqrt(5)"


def test_repro_subset(capsys):
    code, out = run(capsys, "repro", "--only", "2,9")
    assert code == 0 and out.count("[PASS]") == 2
