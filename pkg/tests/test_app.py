import importlib
import io

import pytest

from src.reporting.report_writer import ReportWriter

app_module = importlib.import_module("src.app")  # get actual module not package attr

UNIT = "P{dim=1; ineq [1] >= 0; ineq [-1] >= -1}"
WIDE = "P{dim=1; ineq [1] >= -1; ineq [-1] >= -3}"


def run(*argv):
    stream = io.StringIO()
    code = app_module.run(list(argv), ReportWriter(stream))
    return code, stream.getvalue()


def test_nov_val_prints_valuation():
    code, out = run("nov", "val", "1*T^(1/2) + 2*T^(2)")
    assert code == 0
    assert out == "1/2\n"


def test_malformed_input_exits_2(capsys):
    code, out = run("nov", "val", "1//2")
    assert code == 2
    assert out == ""
    assert capsys.readouterr().err.startswith("novikov: error: 1:2:")


def test_wrong_arity_exits_2(capsys):
    code, _ = run("nov", "add", "1")
    assert code == 2
    assert "expects x y" in capsys.readouterr().err


def test_unknown_subcommand_exits_2():
    code, _ = run("nov", "sqrt", "1")
    assert code == 2


def test_bad_precision_exits_2():
    code, _ = run("nov", "inv", "1 + T", "--prec", "abc")
    assert code == 2


def test_domain_error_exits_2(capsys):
    code, _ = run("nov", "inv", "0")
    assert code == 2
    assert "cannot invert zero" in capsys.readouterr().err


def test_failing_check_exits_1():
    # a neighbourhood equal to P leaves outer pieces touching P
    code, out = run("cech", "locality", UNIT, WIDE, UNIT, UNIT)
    assert code == 1
    assert out.rstrip().endswith("RESULT: FAIL")


def test_verify_cech_is_reproducible():
    first = run("verify", "cech", "--seed", "7", "--prec", "5", "--samples", "10")
    second = run("verify", "cech", "--seed", "7", "--prec", "5", "--samples", "10")
    assert first[0] == 0
    assert first == second
    lines = first[1].splitlines()
    assert "seed: 7" in lines
    assert "precision: 5" in lines
    assert lines[-1] == "RESULT: PASS"


def test_verify_writes_report_file(tmp_path):
    out = tmp_path / "report.txt"
    code, printed = run("verify", "novikov", "--samples", "2", "--out", str(out))
    assert code == 0
    assert printed == ""
    assert out.read_text(encoding="utf-8").splitlines()[-1] == "RESULT: PASS"


def test_verify_failure_exits_1(monkeypatch):
    def broken(run):
        run.case("always_fails", 0, lambda: (False, "forced"))

    monkeypatch.setitem(importlib.import_module("src.verification.suites").SUITES, "novikov", broken)
    code, out = run("verify", "novikov")
    assert code == 1
    assert "counterexample always_fails#0: forced" in out.splitlines()


@pytest.mark.parametrize("env, value", [("NOVIKOV_DEFAULT_SEED", "x"), ("NOVIKOV_DEFAULT_WINDOW", "-")])
def test_bad_environment_exits_2(monkeypatch, env, value):
    monkeypatch.setenv(env, value)
    code, _ = run("nov", "val", "1")
    assert code == 2


def test_verify_operator_with_small_window_passes():
    code, out = run("verify", "operator", "--window", "3", "--samples", "3", "--seed", "3")
    assert code == 0
    assert out.splitlines()[-1] == "RESULT: PASS"
