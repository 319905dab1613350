import logging
from unittest.mock import Mock

from src.telemetry.report_emitter import ReportEmitter


def test_emit_case_sends_result():
    sink = Mock()
    emitter = ReportEmitter(sink)

    emitter.emit_case("cech", "two_term_homotopy_1d", 3, True, "P=[0,1]")

    sink.record.assert_called_once()
    event = sink.record.call_args[0][0]
    assert event.suite == "cech"
    assert event.check == "two_term_homotopy_1d"
    assert event.index == 3
    assert event.verdict == "PASS"
    assert event.detail == "P=[0,1]"


def test_failed_case_is_logged(caplog):
    sink = Mock()
    emitter = ReportEmitter(sink)

    with caplog.at_level(logging.INFO, logger="src.telemetry.report_emitter"):
        emitter.emit_case("novikov", "ultrametric", 0, False)

    assert sink.record.call_args[0][0].verdict == "FAIL"
    assert any(r.message == "verification_case_failed" for r in caplog.records)


def test_sink_error_is_counted_and_logged(caplog):
    sink = Mock()
    sink.record.side_effect = RuntimeError("disk full")
    emitter = ReportEmitter(sink)

    with caplog.at_level(logging.ERROR, logger="src.telemetry.report_emitter"):
        emitter.emit_case("novikov", "ultrametric", 0, False)
        emitter.emit_case("novikov", "ultrametric", 1, True)

    assert emitter.unrecorded == 2
    assert any(r.message == "report_emit_case_failed" for r in caplog.records)
