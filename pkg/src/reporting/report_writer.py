"""Deterministic plain-text rendering of reports through a rich Console."""

from __future__ import annotations

import io
import logging
import sys
from pathlib import Path
from typing import TextIO

from rich.console import Console

from src.models.reports import CaseResult, CheckSummary, ReportHeader, SuiteReport, VerificationReport

logger = logging.getLogger(__name__)


class SuiteCollector:
    """Tallies emitted cases per check, keeping the first counterexample of each."""

    def __init__(self, suite: str) -> None:
        self.suite = suite
        self._checks: dict[str, CheckSummary] = {}
        self._counterexamples: dict[str, CaseResult] = {}
        self.unrecorded = 0

    def record(self, result: CaseResult) -> None:
        summary = self._checks.setdefault(result.check, CheckSummary(check=result.check, cases=0, failures=0))
        summary.cases += 1
        if result.verdict == "FAIL":
            summary.failures += 1
            self._counterexamples.setdefault(result.check, result)

    def note(self, check: str, note: str) -> None:
        summary = self._checks.setdefault(check, CheckSummary(check=check, cases=0, failures=0))
        summary.note = note

    def report(self) -> SuiteReport:
        return SuiteReport(
            suite=self.suite,
            checks=list(self._checks.values()),
            counterexamples=list(self._counterexamples.values()),
            unrecorded=self.unrecorded,
        )


def _console(file: TextIO) -> Console:
    return Console(
        file=file,
        width=240,
        no_color=True,
        highlight=False,
        markup=False,
        emoji=False,
        force_terminal=False,
        soft_wrap=True,
    )


class ReportWriter:
    def __init__(self, stream: TextIO | None = None) -> None:
        self.stream = stream

    def header_lines(self, header: ReportHeader) -> list[str]:
        samples = str(header.samples) if header.samples is not None else "default"
        return [
            f"tool: novikov-affinoid {header.tool_version}",
            f"suite: {header.suite}",
            f"seed: {header.seed}",
            f"precision: {header.precision}",
            f"samples: {samples}",
            f"window: {header.window}",
            f"conventions: koszul={header.koszul} duality={header.duality}",
        ]

    def render(self, report: VerificationReport) -> str:
        buffer = io.StringIO()
        console = _console(buffer)
        for line in self.header_lines(report.header):
            console.print(line)
        for suite in report.suites:
            console.print(f"== {suite.suite}")
            for check in suite.checks:
                line = f"{check.check}: {check.cases} cases, {check.failures} failed, {check.verdict}"
                if check.note:
                    line += f" ({check.note})"
                console.print(line)
            for case in suite.counterexamples:
                console.print(f"counterexample {case.check}#{case.index}: {case.detail}")
            if suite.unrecorded:
                console.print(f"unrecorded cases: {suite.unrecorded}")
            console.print(f"suite {suite.suite}: {suite.verdict}")
        console.print(f"RESULT: {report.verdict}")
        return buffer.getvalue()

    def write(self, report: VerificationReport, out: Path | None = None) -> str:
        text = self.render(report)
        self.emit(text, out)
        return text

    def emit(self, text: str, out: Path | None = None) -> None:
        if out is not None:
            try:
                out.write_text(text, encoding="utf-8")
            except OSError as e:
                logger.error("report_write_failed", extra={"path": str(out), "error": str(e)})
                raise
            return
        stream = self.stream or sys.stdout
        stream.write(text)
        stream.flush()
