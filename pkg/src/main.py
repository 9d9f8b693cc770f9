"""
slicexp - Main Entry Point

Parses the command line, assembles a job specification from a JSON file (or
stdin) and flags, runs it and writes the report.

    slicexp exp job.json --json
    slicexp sqrt --coeffs 1,0,1
    slicexp sum-rule - --domain minus-real < job.json
    slicexp --check-report report.json

Exit codes: 0 success, 1 identity violation / prediction disagreement /
no square root, 2 input or numerical error.

Author: Slicexp Team
Version: 1.0.0
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError

from . import __version__
from .cli.commands import error_report, run_job
from .cli.reporting import check_report, write_report
from .config import get_settings
from .core.exceptions import ErrorHandler, ExpressionError, SliceRegularError, ValidationError
from .core.logging import LoggingConfig
from .hypercomplex.expressions import load_json
from .models.requests import Command, DomainSpec, GridSpec, JobSpec

logger = logging.getLogger(__name__)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="evaluation tolerance (default from settings)")
    common.add_argument("--series-tol", type=float, help="series remainder target")
    common.add_argument("--grid", help="sampling grid NAxNB, e.g. 21x21")
    common.add_argument("--domain", help="whole | minus-real | rect:amin,amax,bmax | rect-minus-real:amin,amax,bmax")
    common.add_argument("--seed", type=int, help="jitter the grid and draw sample units with this seed")
    common.add_argument("--method", choices=["closed", "series"], help="exponential used by identities")
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--output", help="write the report to this file")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    common.add_argument("--log-format", choices=["json", "text"])
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="slicexp",
        description="Verify *-exponential identities, sum rules and square roots of slice functions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--check-report", metavar="FILE", help="re-validate a JSON report and exit")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    for command in Command:
        sub = subparsers.add_parser(command.value, parents=[common], help=f"run a {command.value} job")
        sub.add_argument("job", nargs="?", help="JSON job file, or - for stdin")
        if command is Command.SQRT:
            sub.add_argument("--coeffs", help="real coefficients in ascending order, e.g. 1,0,1")
    return parser


def _read_job(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as e:
            raise ValidationError(
                f"Cannot read job file: {e}",
                error_code="JOB_UNREADABLE",
                context={"path": path},
                original_error=e,
            ) from e
    data = load_json(text)
    if isinstance(data, dict) and "op" in data:
        return {"functions": [data]}
    if isinstance(data, list):
        return {"functions": data}
    if not isinstance(data, dict):
        raise ExpressionError("A job must be a JSON object", error_code="INVALID_JOB")
    return data


def build_spec(args: argparse.Namespace) -> JobSpec:
    """
    Merge the job file with command-line overrides.

    Raises:
        ValidationError: If the merged job does not validate
    """
    data = _read_job(args.job)
    command = Command(args.command)
    if data.get("command") not in (None, command.value):
        raise ValidationError(
            f"Job file is a '{data['command']}' job, not '{command.value}'",
            error_code="COMMAND_MISMATCH",
        )
    data["command"] = command.value
    try:
        if getattr(args, "coeffs", None):
            data["coeffs"] = [float(c) for c in args.coeffs.split(",")]
        if args.domain:
            data["domain"] = DomainSpec.from_flag(args.domain).model_dump()
        if args.grid:
            data["grid"] = GridSpec.from_flag(args.grid).model_dump()
        tolerances = dict(data.get("tolerances") or {})
        if args.tol is not None:
            tolerances["eval"] = args.tol
        if args.series_tol is not None:
            tolerances["series"] = args.series_tol
        data["tolerances"] = tolerances
        if args.seed is not None:
            data["seed"] = args.seed
        if args.method:
            data["method"] = args.method
        if args.output:
            data["output"] = args.output
        return JobSpec.model_validate(data)
    except PydanticValidationError as e:
        raise ValidationError(
            "Invalid job specification",
            error_code="INVALID_JOB",
            context={"errors": [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()]},
            original_error=e,
        ) from e
    except ValueError as e:
        raise ValidationError(str(e), error_code="INVALID_FLAG", original_error=e) from e


def _setup_logging(args: argparse.Namespace) -> None:
    settings = get_settings().logging
    level = getattr(args, "log_level", None) or settings.level.value
    log_format = getattr(args, "log_format", None) or settings.format.value
    LoggingConfig.setup_logging(
        log_level=level,
        log_file=settings.file_path,
        enable_structured=log_format == "json",
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Console entry point; returns the exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args)

    if args.check_report:
        try:
            report = check_report(args.check_report)
        except SliceRegularError as e:
            sys.stderr.write(f"{e}\n")
            return ErrorHandler.exit_code_for(e)
        sys.stdout.write(f"report ok: {report.command.value if report.command else 'job'} {report.status.value}\n")
        return 0

    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    command = Command(args.command)
    try:
        spec = build_spec(args)
    except SliceRegularError as e:
        report = error_report(e, command)
        write_report(report, args.json, args.output)
        return report.exit_code

    try:
        report = run_job(spec)
    except Exception as e:  # noqa: BLE001
        logger.exception("Job failed unexpectedly")
        report = error_report(e, command)
    write_report(report, args.json, spec.output)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
