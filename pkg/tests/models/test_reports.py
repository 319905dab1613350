from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.models.invocation import Invocation
from src.models.reports import CaseResult, CheckSummary, ReportHeader, SuiteReport, VerificationReport


def header(**overrides):
    fields = dict(tool_version="0.1.0", suite="cech", seed=7, precision="5", samples=100, window=6)
    fields.update(overrides)
    return ReportHeader(**fields)


def test_header_default_conventions():
    h = header()
    assert h.koszul == "standard"
    assert h.duality == "dual"


def test_verdicts_roll_up():
    good = SuiteReport(suite="a", checks=[CheckSummary(check="x", cases=3, failures=0)])
    bad = SuiteReport(suite="b", checks=[CheckSummary(check="y", cases=3, failures=1)])
    assert good.verdict == "PASS"
    assert bad.verdict == "FAIL"
    assert VerificationReport(header=header(), suites=[good]).verdict == "PASS"
    assert VerificationReport(header=header(), suites=[good, bad]).verdict == "FAIL"


def test_case_result_rejects_unknown_verdict():
    with pytest.raises(ValidationError):
        CaseResult(suite="s", check="c", index=0, verdict="MAYBE")


def test_invocation_parses_precision_text():
    inv = Invocation(command="nov", action="val", precision="7/2", seed=0, window=6)
    assert inv.precision == Fraction(7, 2)
    assert inv.axis == 1
    assert inv.form == "staircase"


def test_invocation_validates_ranges():
    with pytest.raises(ValidationError):
        Invocation(command="verify", action="all", precision="8", seed=0, window=6, samples=0)
    with pytest.raises(ValidationError):
        Invocation(command="op", action="disjoint-h", precision="8", seed=0, window=6, axis=0)
    with pytest.raises(ValidationError):
        Invocation(command="op", action="h-eval", precision="8", seed=0, window=6, form="zigzag")
