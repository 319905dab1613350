import io

from src.models.reports import CaseResult, ReportHeader, VerificationReport
from src.reporting.report_writer import ReportWriter, SuiteCollector


def case(check, index, verdict, detail=""):
    return CaseResult(suite="cech", check=check, index=index, verdict=verdict, detail=detail)


def make_report():
    collector = SuiteCollector("cech")
    collector.record(case("two_term_homotopy_1d", 0, "PASS"))
    collector.record(case("two_term_homotopy_1d", 1, "FAIL", "P=[0,1] axis=1 level=1/2"))
    collector.record(case("two_term_homotopy_1d", 2, "FAIL", "second"))
    collector.record(case("laurent_contraction", 0, "PASS"))
    collector.note("laurent_contraction", "plain sum fails 3 of 5")
    header = ReportHeader(tool_version="0.1.0", suite="cech", seed=7, precision="5", samples=None, window=6)
    return VerificationReport(header=header, suites=[collector.report()])


def test_collector_keeps_first_counterexample():
    report = make_report().suites[0]
    assert [c.check for c in report.checks] == ["two_term_homotopy_1d", "laurent_contraction"]
    assert report.checks[0].cases == 3
    assert report.checks[0].failures == 2
    assert [c.detail for c in report.counterexamples] == ["P=[0,1] axis=1 level=1/2"]


def test_render_is_plain_and_ordered():
    text = ReportWriter().render(make_report())
    lines = text.splitlines()
    assert lines[0] == "tool: novikov-affinoid 0.1.0"
    assert "samples: default" in lines
    assert "conventions: koszul=standard duality=dual" in lines
    assert "two_term_homotopy_1d: 3 cases, 2 failed, FAIL" in lines
    assert "laurent_contraction: 1 cases, 0 failed, PASS (plain sum fails 3 of 5)" in lines
    assert "counterexample two_term_homotopy_1d#1: P=[0,1] axis=1 level=1/2" in lines
    assert lines[-1] == "RESULT: FAIL"
    assert "\x1b" not in text


def test_render_is_deterministic():
    assert ReportWriter().render(make_report()) == ReportWriter().render(make_report())


def test_write_to_stream_and_file(tmp_path):
    stream = io.StringIO()
    writer = ReportWriter(stream)
    text = writer.write(make_report())
    assert stream.getvalue() == text

    out = tmp_path / "report.txt"
    writer.write(make_report(), out)
    assert out.read_text(encoding="utf-8") == text


def test_unrecorded_cases_fail_the_suite():
    collector = SuiteCollector("novikov")
    collector.record(case("ultrametric", 0, "PASS"))
    collector.unrecorded = 1
    suite = collector.report()
    assert suite.verdict == "FAIL"
    header = ReportHeader(tool_version="0.1.0", suite="novikov", seed=0, precision="8", samples=None, window=6)
    lines = ReportWriter().render(VerificationReport(header=header, suites=[suite])).splitlines()
    assert "unrecorded cases: 1" in lines
    assert lines[-1] == "RESULT: FAIL"
