import json

import pandas as pd

from cli import run


def _report(capsys):
    return json.loads(capsys.readouterr().out)


def test_classify(capsys):
    assert run(["classify", "x^2*(x-1)^3"]) == 0
    report = _report(capsys)
    assert report["status"] == "SUCCESS"
    assert report["verdict"] == "TypeJ"
    assert report["command"] == "classify"


def test_classify_solver(capsys):
    assert run(["classify", "--type-w", "1"]) == 0
    assert _report(capsys)["u"] == "x - 3/4"


def test_canonical_form(capsys):
    assert run(["canon", "--k", "3", "--first", "t1 t2 t1"]) == 0
    report = _report(capsys)
    assert report["canonical"] == "t2 t1 t2"
    assert report["permutation"] == [3, 2, 1]


def test_parse_error_exit_code(capsys):
    assert run(["classify", "x +"]) == 2
    report = _report(capsys)
    assert report["status"] == "ERROR_PARSE"
    assert report["position"] == 3


def test_domain_error_exit_code(capsys):
    assert run(["classify", "x^4"]) == 1
    assert _report(capsys)["status"] == "ERROR_DOMAIN:DECOMPOSABLE_INPUT"


def test_unknown_command():
    assert run(["bogus"]) == 2


def test_swap_command(capsys):
    assert run(["swap", "--decomp", "x*(x+1)^5; x^5", "--at", "1"]) == 0
    report = _report(capsys)
    assert report["result"]["decomposition"] == ["x^5", "x^6 + x"]


def test_frob_lift_csv(capsys, tmp_path):
    path = tmp_path / "lift.csv"
    assert run(["frob-lift", "--p", "5", "--prec", "3", "--poly", "x^5", "--csv", str(path)]) == 0
    assert _report(capsys)["count"] == 5
    table = pd.read_csv(path, encoding="utf-8-sig")
    assert len(table) == 5
    assert list(table.columns) == ["residue", "point"]


def test_decompose_all(capsys):
    assert run(["decompose", "x^6", "--all"]) == 0
    report = _report(capsys)
    assert report["decomposition"] == ["x^3", "x^2"]
    assert len(report["classes"]["classes"]) == 2


def test_text_format(capsys):
    assert run(["decompose", "x^4 + 2*x^2 + 1", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "status: SUCCESS" in out
    assert "x^2 + 2*x + 1" in out
