import logging
from typing import Protocol

from src.models.reports import CaseResult

logger = logging.getLogger(__name__)


class CaseSink(Protocol):
    def record(self, result: CaseResult) -> None: ...


class ReportEmitter:
    """Turns case outcomes into CaseResult events for a sink (normally a SuiteCollector).

    A case the sink refuses is counted in ``unrecorded``; a suite with
    unrecorded cases cannot pass.
    """

    def __init__(self, sink: CaseSink):
        self.sink = sink
        self.unrecorded = 0

    def emit_case(self, suite: str, check: str, index: int, passed: bool, detail: str = "") -> None:
        try:
            event = CaseResult(
                suite=suite,
                check=check,
                index=index,
                verdict="PASS" if passed else "FAIL",
                detail=detail,
            )
            self.sink.record(event)
        except Exception as e:
            self.unrecorded += 1
            logger.error(
                "report_emit_case_failed",
                extra={"suite": suite, "check": check, "index": index, "passed": passed, "error": str(e)},
            )
            return
        if not passed:
            logger.info(
                "verification_case_failed",
                extra={"suite": suite, "check": check, "index": index},
            )
