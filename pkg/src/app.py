import argparse
import logging
import sys
from importlib.metadata import PackageNotFoundError, version
from typing import Sequence

from opentelemetry import trace
from pydantic import ValidationError

from src.algebra.errors import NovikovError
from src.algebra.novikov import Precision
from src.cli.commands import COMMANDS, CommandResult, arity_ok
from src.config import Settings, load_settings
from src.formats.text import TextFormatError, format_rational
from src.models.invocation import Invocation
from src.models.reports import ReportHeader, VerificationReport
from src.reporting.report_writer import ReportWriter
from src.telemetry.tracing import instrumentation
from src.verification.suites import SUITE_NAMES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def tool_version() -> str:
    try:
        return version("novikov-affinoid")
    except PackageNotFoundError:
        return "0.1.0"


class VerificationService:
    """Runs seeded verification suites and assembles one report."""

    def run(self, invocation: Invocation) -> VerificationReport:
        tracer = trace.get_tracer(__name__)
        names = list(SUITE_NAMES) if invocation.action == "all" else [invocation.action]
        prec = Precision(invocation.precision)
        suites = []
        for name in names:
            with tracer.start_as_current_span(
                "verification_suite",
                attributes={
                    "suite": name,
                    "seed": invocation.seed,
                    "precision": format_rational(invocation.precision),
                    "samples": invocation.samples if invocation.samples is not None else -1,
                },
            ):
                collector = run_suite(name, invocation.seed, prec, invocation.window, invocation.samples)
                suites.append(collector.report())
        header = ReportHeader(
            tool_version=tool_version(),
            suite=invocation.action,
            seed=invocation.seed,
            precision=format_rational(invocation.precision),
            samples=invocation.samples,
            window=invocation.window,
        )
        report = VerificationReport(header=header, suites=suites)
        logger.info("verification_done", extra={"suite": invocation.action, "verdict": report.verdict})
        return report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def create_app(settings: Settings | None = None) -> argparse.ArgumentParser:
    """Argument parser for every subcommand; configures logging from settings."""
    settings = settings or load_settings()
    logging.basicConfig(level=settings.log_level, stream=sys.stderr)

    common = _Parser(add_help=False)
    common.add_argument("--prec", default=str(settings.default_precision), help="T-adic cutoff E (rational)")
    common.add_argument("--seed", type=int, default=settings.default_seed)
    common.add_argument("--samples", type=int, default=settings.default_samples)
    common.add_argument("--window", type=int, default=settings.default_window, help="window radius W")
    common.add_argument("--axis", type=int, default=1)
    common.add_argument("--form", choices=["staircase", "plain_sum"], default="staircase")
    common.add_argument("--convention", choices=["standard", "dual"], default="standard")
    common.add_argument("--out", default=None, help="write output to this file")

    parser = _Parser(prog="novikov", description="Novikov-field, affinoid and Cech computations")
    groups = parser.add_subparsers(dest="command", required=True)
    for group, actions in COMMANDS.items():
        group_parser = groups.add_parser(group)
        sub = group_parser.add_subparsers(dest="action", required=True)
        for action, spec in actions.items():
            p = sub.add_parser(action, parents=[common], help=spec.help)
            p.add_argument("arguments", nargs="*", metavar="|".join(spec.params) or "ARG")
    verify = groups.add_parser("verify").add_subparsers(dest="action", required=True)
    for name in (*SUITE_NAMES, "all"):
        verify.add_parser(name, parents=[common], help=f"run the {name} suite")
    return parser


def _invocation(namespace: argparse.Namespace) -> Invocation:
    return Invocation(
        command=namespace.command,
        action=namespace.action,
        arguments=list(getattr(namespace, "arguments", [])),
        precision=namespace.prec,
        seed=namespace.seed,
        samples=namespace.samples,
        window=namespace.window,
        axis=namespace.axis,
        form=namespace.form,
        convention=namespace.convention,
        out=namespace.out,
    )


def _execute(invocation: Invocation, writer: ReportWriter) -> int:
    if invocation.command == "verify":
        report = VerificationService().run(invocation)
        writer.write(report, invocation.out)
        return EXIT_OK if report.verdict == "PASS" else EXIT_FAIL
    spec = COMMANDS[invocation.command][invocation.action]
    if not arity_ok(spec, invocation.arguments):
        raise UsageError(
            f"{invocation.command} {invocation.action} expects {' '.join(spec.params)}"
        )
    result: CommandResult = spec.handler(invocation)
    writer.emit(result.text + "\n", invocation.out)
    return result.exit_code


def run(argv: Sequence[str] | None = None, writer: ReportWriter | None = None) -> int:
    """Parse argv, run the command, print its output; returns the exit code."""
    writer = writer or ReportWriter()
    tracer = trace.get_tracer(__name__)
    try:
        settings = load_settings()
        instrumentation(settings)
        namespace = create_app(settings).parse_args(list(argv) if argv is not None else None)
        invocation = _invocation(namespace)
        with tracer.start_as_current_span(
            "cli_command", attributes={"command": invocation.command, "action": invocation.action}
        ):
            return _execute(invocation, writer)
    except ValidationError as e:
        logger.info("cli_input_error", extra={"error_type": "ValidationError"})
        message = "; ".join(str(err["msg"]) for err in e.errors())
    except (UsageError, NovikovError, TextFormatError, ValueError, OSError) as e:
        logger.info("cli_input_error", extra={"error_type": type(e).__name__})
        message = str(e) or type(e).__name__
    print(f"novikov: error: {message}", file=sys.stderr)
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())
