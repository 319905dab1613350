"""Data models for verification reports."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

Verdict = Literal["PASS", "FAIL"]


class ReportHeader(BaseModel):
    """Fixed header that makes a report reproducible."""

    tool_version: str = Field(description="Package version that produced the report")
    suite: str = Field(description="Suite name, or the subcommand for computations")
    seed: int = Field(description="Seed of the random generator")
    precision: str = Field(description="T-adic cutoff E as a rational p/q")
    samples: int | None = Field(default=None, description="Sample-count override, if any")
    window: int = Field(description="Radius of the exponent window")
    koszul: Literal["standard", "dual"] = Field(
        default="standard", description="Sign convention of the Floer differential"
    )
    duality: Literal["standard", "dual"] = Field(
        default="dual", description="Convention in which the duality homotopy is checked"
    )


class CaseResult(BaseModel):
    """Outcome of one property check."""

    suite: str = Field(description="Suite the case belongs to")
    check: str = Field(description="Name of the property being checked")
    index: int = Field(description="Position of the case within its check")
    verdict: Verdict = Field(description="PASS or FAIL")
    detail: str = Field(default="", description="Witness or counterexample in canonical text")


class CheckSummary(BaseModel):
    check: str = Field(description="Name of the property")
    cases: int = Field(description="Number of cases run")
    failures: int = Field(description="Number of failed cases")
    note: str = Field(default="", description="Extra finding reported with the check")

    @property
    def verdict(self) -> Verdict:
        return "FAIL" if self.failures else "PASS"


class SuiteReport(BaseModel):
    """All checks of one suite, in execution order."""

    suite: str = Field(description="Suite name")
    checks: list[CheckSummary] = Field(default_factory=list, description="Per-check tallies")
    counterexamples: list[CaseResult] = Field(
        default_factory=list, description="First failing case of each failed check"
    )
    unrecorded: int = Field(default=0, description="Cases whose result could not be recorded")

    @property
    def verdict(self) -> Verdict:
        return "FAIL" if self.unrecorded or any(c.failures for c in self.checks) else "PASS"


class VerificationReport(BaseModel):
    """A header plus one or more suite reports."""

    header: ReportHeader = Field(description="Reproducibility header")
    suites: list[SuiteReport] = Field(default_factory=list, description="Suite reports in order")

    @property
    def verdict(self) -> Verdict:
        return "FAIL" if any(s.verdict == "FAIL" for s in self.suites) else "PASS"

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "header": {
                        "tool_version": "0.1.0",
                        "suite": "cech",
                        "seed": 7,
                        "precision": "5",
                        "samples": 100,
                        "window": 6,
                        "koszul": "standard",
                        "duality": "dual",
                    },
                    "suites": [
                        {
                            "suite": "cech",
                            "checks": [{"check": "two_term_homotopy_1d", "cases": 100, "failures": 0}],
                            "counterexamples": [],
                        }
                    ],
                }
            ]
        }
    }
