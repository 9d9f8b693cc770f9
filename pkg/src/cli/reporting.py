"""
Report rendering and report checking

Reports are printed as text by default or as JSON with ``--json``. The text
form uses the usual notation (f_0, f_v, mu, nu, n/m/p) so results can be
compared with hand computations.
"""

import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError

from ..core.exceptions import ReportValidationError
from ..models.requests import Command
from ..models.responses import JobReport, ReportStatus

logger = logging.getLogger(__name__)


def _num(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.3e}"


def _quaternion(values: List[float]) -> str:
    w, x, y, z = values
    return f"{w:.6g} {x:+.6g}i {y:+.6g}j {z:+.6g}k"


def _poly(coeffs: List[float]) -> str:
    terms = []
    for n, c in enumerate(coeffs):
        if c == 0.0:
            continue
        power = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
        terms.append(f"{c:.6g}{power}" if power == "" or c != 1.0 else power)
    return " + ".join(reversed(terms)) or "0"


def _render_evaluation(report: JobReport) -> List[str]:
    section = report.evaluation
    assert section is not None
    lines = ["values f(q):"]
    for entry in section.values:
        line = f"  f({_quaternion(entry.point)}) = {_quaternion(entry.value)}"
        if entry.representation_residual is not None:
            line += f"   [representation residual {_num(entry.representation_residual)}]"
        lines.append(line)
    lines.append(f"stem symmetry residual: {_num(section.stem_symmetry_residual)}")
    lines.append(f"threshold: {_num(section.threshold)}   passed: {section.passed}")
    return lines


def _render_exp(report: JobReport) -> List[str]:
    section = report.exp
    assert section is not None
    lines = [
        f"series truncation N = {section.truncation.n_terms}"
        f" (M = {_num(section.truncation.bound_m)}, remainder <= {_num(section.truncation.remainder_bound)})",
        f"|exp(f_0)(mu + nu f_v) - series|: {_num(section.dual_path_residual)}",
        f"|exp(f_0)(mu + nu f_v) - exp(f_0)*exp_*(f_v)|: {_num(section.factorized_residual)}",
        f"sup |exp_*(f)|: {_num(section.sup_norm)}",
        f"threshold: {_num(section.threshold)}   agree: {section.agree}",
    ]
    for entry in section.values:
        lines.append(f"  exp_*(f)({_quaternion(entry.point)}) = {_quaternion(entry.value)}")
    return lines


def _render_identities(report: JobReport) -> List[str]:
    section = report.identities
    assert section is not None
    lines = [f"exponential: {section.method}"]
    for entry in section.residuals:
        mark = "ok" if entry.passed else "VIOLATED"
        lines.append(f"  {entry.name:<12} {_num(entry.value)}  {mark}")
    lines.append(f"min |exp_*(f)| on the grid: {_num(section.min_norm)}   lower bound: {_num(section.norm_bound)}")
    lines.append(f"threshold: {_num(section.threshold)}   passed: {section.passed}")
    return lines


def _render_sum_rule(report: JobReport) -> List[str]:
    section = report.sum_rule
    assert section is not None
    lines = [
        f"case: {section.case}",
        f"f_v, g_v linearly dependent: {section.commutes}" + (" (indeterminate)" if section.indeterminate else ""),
        f"n = {section.n}, m = {section.m}, p = {section.p}, parity ok: {section.parity_ok}",
        f"<f_v, g_v>_*: {section.inner if section.inner is not None else 'not a real constant'}",
    ]
    if section.witnesses is not None:
        lines.append(f"witnesses: alpha = {_poly(section.witnesses.alpha)}, beta = {_poly(section.witnesses.beta)}")
    lines.extend(
        [
            f"|exp_*(f+g) - exp_*(f)*exp_*(g)|: {_num(section.numeric_residual)} (threshold {_num(section.threshold)})",
            f"predicted equal: {section.predicted_equal}   measured equal: {section.measured_equal}",
            f"prediction scope: {section.prediction_scope}",
        ]
    )
    if section.disagreement:
        lines.append("DISAGREEMENT between prediction and measurement")
    return lines


def _render_sqrt(report: JobReport) -> List[str]:
    section = report.sqrt
    assert section is not None
    structure = section.structure
    lines = [f"h(q) = {_poly(section.coeffs)}", f"leading coefficient: {structure.leading:.6g}"]
    for root in structure.real_roots:
        lines.append(f"  real zero {root.root:.6g} of multiplicity {root.multiplicity}")
    for sphere in structure.spheres:
        lines.append(
            f"  sphere S_({sphere.a:.6g} + {sphere.b:.6g}J) of spherical multiplicity {sphere.spherical_multiplicity}"
        )
    lines.append(f"has square root: {section.has_sqrt} ({section.reason})")
    if section.sqrt is not None:
        lines.append(f"sqrt(h)(q) = {_poly(section.sqrt)}   |sqrt(h)^2 - h| = {_num(section.square_residual)}")
    return lines


def _render_classification(report: JobReport) -> List[str]:
    section = report.classification
    assert section is not None
    lines = [f"exp_*(f) is {section.description}"]
    if section.n is not None:
        lines.append(f"f_v^s = n^2 pi^2 with n = {section.n}")
    return lines


RENDERERS: Dict[Command, Callable[[JobReport], List[str]]] = {
    Command.EVAL: _render_evaluation,
    Command.EXP: _render_exp,
    Command.IDENTITIES: _render_identities,
    Command.SUM_RULE: _render_sum_rule,
    Command.SQRT: _render_sqrt,
    Command.CLASSIFY: _render_classification,
}


def render_text(report: JobReport) -> str:
    """Human-readable report"""
    command = report.command.value if report.command is not None else "job"
    lines = [f"slicexp {report.version} {command}: {report.status.value} (exit {report.exit_code})"]
    if report.functions:
        lines.append("functions: " + "; ".join(report.functions))
    if report.domain is not None:
        lines.append(f"domain: {report.domain.get('kind')}")
    if report.status is ReportStatus.ERROR and report.error is not None:
        lines.append(f"error [{report.error.error_code}]: {report.error.message}")
    elif report.command is not None:
        lines.extend(RENDERERS[report.command](report))
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def render_json(report: JobReport) -> str:
    return report.model_dump_json(indent=2) + "\n"


def write_report(report: JobReport, as_json: bool = False, output: Optional[str] = None) -> None:
    """Write the report to ``output`` or stdout"""
    text = render_json(report) if as_json else render_text(report)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info("Report written", extra={"path": output})
    else:
        sys.stdout.write(text)


def check_report(path: str) -> JobReport:
    """
    Re-validate a JSON report.

    Raises:
        ReportValidationError: If the file is missing or not a valid report
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ReportValidationError(
            f"Cannot read report: {e}",
            error_code="REPORT_UNREADABLE",
            context={"path": path},
            original_error=e,
        ) from e
    try:
        return JobReport.model_validate_json(text)
    except PydanticValidationError as e:
        raise ReportValidationError(
            "Report does not validate",
            error_code="INVALID_REPORT",
            context={"path": path, "errors": [err["msg"] for err in e.errors()][:10]},
            original_error=e,
        ) from e
