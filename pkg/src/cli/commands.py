"""
Job execution for the slicexp command line

``JobRunner`` turns a validated ``JobSpec`` into a ``JobReport``: it builds the
functions from their expression trees, samples the grid, runs the command's
checks and decides between ok (exit 0) and violation (exit 1). Errors that
prevent a report from being produced become error reports (exit 2).

Author: Slicexp Team
Version: 1.0.0
"""

import json
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from .. import __version__
from ..config import get_settings
from ..core.exceptions import ErrorHandler, SliceRegularError, ValidationError
from ..core.logging import LoggerMixin, PerformanceLogger
from ..hypercomplex.expressions import ExpressionParser
from ..hypercomplex.quaternion import Quaternion, sphere_coords
from ..hypercomplex.slicefn import (
    FunctionKind,
    PlanarDomain,
    SliceFunction,
    evaluate,
    grid_residual,
    relative_tolerance,
    representation_check,
    sample_units,
    stem_symmetry_residual,
    sup_norm,
)
from ..hypercomplex.sqrt import RealPolynomial, has_sqrt, sqrt
from ..hypercomplex.starexp import (
    SeriesTruncation,
    classify_exp,
    exp_star_closed,
    exp_star_factorized,
    exp_star_series,
    sum_rule,
    verify_exp_identities,
)
from ..models.requests import Command, JobSpec
from ..models.responses import (
    ClassificationReport,
    ErrorInfo,
    EvaluationReport,
    ExpReport,
    IdentityReport,
    JobReport,
    PointValue,
    RealRootModel,
    ReportStatus,
    ResidualEntry,
    SphereModel,
    SqrtReport,
    SumRuleReportModel,
    TruncationModel,
    WitnessModel,
    ZeroStructureModel,
    finite_or_none,
)

logger = logging.getLogger(__name__)
performance = PerformanceLogger(logging.getLogger("src.performance"))

GRID_SURROGATE_NOTE = "identically-zero and constancy tests on non-polynomial functions use the sampling grid"


class JobRunner(LoggerMixin):
    """
    Runs one job.

    Args:
        spec: Validated job specification
    """

    def __init__(self, spec: JobSpec):
        settings = get_settings()
        self.spec = spec
        self.domain = spec.domain.to_domain()
        self.tol = spec.tolerances.eval or settings.tolerances.eval
        self.series_tol = spec.tolerances.series or settings.tolerances.series
        self.parser = ExpressionParser(self.domain, self.series_tol)
        self.notes: List[str] = []
        self._handlers: Dict[Command, Callable[[List[SliceFunction]], Tuple[str, BaseModel, bool]]] = {
            Command.EVAL: self._evaluate,
            Command.EXP: self._exp,
            Command.IDENTITIES: self._identities,
            Command.SUM_RULE: self._sum_rule,
            Command.SQRT: self._sqrt,
            Command.CLASSIFY: self._classify,
        }

    def run(self) -> JobReport:
        """Execute the job; library errors become error reports"""
        command = self.spec.command
        self.logger.info("Running job", extra={"command": command.value, "domain": self.domain.kind.value})
        try:
            with performance.timer(f"job:{command.value}"):
                functions = [self.parser.parse(node) for node in self.spec.functions]
                section, model, ok = self._handlers[command](functions)
        except SliceRegularError as e:
            return error_report(e, command, self._context())

        if any(f.kind is not FunctionKind.POLYNOMIAL for f in functions) and command is not Command.EVAL:
            self.notes.append(GRID_SURROGATE_NOTE)
        status = ReportStatus.OK if ok else ReportStatus.VIOLATION
        return JobReport(
            version=__version__,
            command=command,
            status=status,
            exit_code=0 if ok else 1,
            functions=[f.label for f in functions],
            notes=self.notes,
            **{section: model},
            **self._context(),
        )

    def _context(self) -> Dict[str, Any]:
        return {
            "domain": self.domain.to_dict(),
            "grid": self.spec.grid,
            "tolerances": {"eval": self.tol, "series": self.series_tol},
            "seed": self.spec.seed,
        }

    def grid_for(self, domain: PlanarDomain) -> np.ndarray:
        return domain.sample_grid(self.spec.grid.n_alpha, self.spec.grid.n_beta, self.spec.seed)

    def _points(self) -> List[Quaternion]:
        return [Quaternion.from_list(p, field_name="points") for p in self.spec.points]

    # Commands

    def _evaluate(self, functions: List[SliceFunction]) -> Tuple[str, BaseModel, bool]:
        f = functions[0]
        points = self._points()
        units = sample_units(len(points), self.spec.seed)
        values = []
        residuals = []
        for point, other in zip(points, units):
            value = evaluate(f, point)
            alpha, beta, unit = sphere_coords(point)
            residual = None
            if unit is not None:
                residual = representation_check(f, alpha, beta, unit, other)
                residuals.append(residual)
            values.append(PointValue(point=point.to_list(), value=value.to_list(), representation_residual=residual))

        grid = self.grid_for(f.domain)
        symmetry = stem_symmetry_residual(f, grid)
        scale = max([sup_norm(f, grid)] + [float(np.linalg.norm(v.value)) for v in values])
        threshold = relative_tolerance(self.tol, scale)
        worst = max(residuals, default=0.0)
        passed = worst <= threshold and symmetry <= threshold
        report = EvaluationReport(
            values=values,
            stem_symmetry_residual=finite_or_none(symmetry),
            max_representation_residual=finite_or_none(worst),
            threshold=threshold,
            passed=passed,
        )
        return "evaluation", report, passed

    def _exp(self, functions: List[SliceFunction]) -> Tuple[str, BaseModel, bool]:
        f = functions[0]
        grid = self.grid_for(f.domain)
        closed = exp_star_closed(f, self.series_tol)
        series = exp_star_series(f, self.series_tol, grid)
        factorized = exp_star_factorized(f, self.series_tol, grid)
        truncation: SeriesTruncation = series.info["truncation"]

        dual = grid_residual(closed, series, grid)
        split = grid_residual(closed, factorized, grid)
        size = sup_norm(closed, grid)
        threshold = relative_tolerance(self.tol, size)
        agree = dual <= threshold and split <= threshold
        values = [
            PointValue(point=p.to_list(), value=evaluate(closed, p).to_list()) for p in self._points()
        ]
        report = ExpReport(
            truncation=TruncationModel(
                n_terms=truncation.n_terms,
                bound_m=finite_or_none(truncation.bound_m),
                remainder_bound=finite_or_none(truncation.remainder_bound),
            ),
            dual_path_residual=finite_or_none(dual),
            factorized_residual=finite_or_none(split),
            threshold=threshold,
            agree=agree,
            sup_norm=finite_or_none(size),
            values=values,
        )
        return "exp", report, agree

    def _identities(self, functions: List[SliceFunction]) -> Tuple[str, BaseModel, bool]:
        f = functions[0]
        result = verify_exp_identities(f, self.tol, self.grid_for(f.domain), self.spec.method)
        entries = [
            ResidualEntry(
                name=name,
                value=finite_or_none(value),
                threshold=result.threshold,
                passed=value <= result.threshold,
            )
            for name, value in result.residuals.items()
        ]
        report = IdentityReport(
            method=result.method,
            residuals=entries,
            threshold=result.threshold,
            min_norm=finite_or_none(result.min_norm),
            norm_bound=finite_or_none(result.norm_bound),
            never_vanishing=result.never_vanishing,
            passed=result.passed,
        )
        return "identities", report, result.passed

    def _sum_rule(self, functions: List[SliceFunction]) -> Tuple[str, BaseModel, bool]:
        f, g = functions
        grid = self.grid_for(f.domain.intersect(g.domain))
        result = sum_rule(f, g, self.tol, grid)
        dependence = result.dependence
        witnesses = None
        if dependence.witnesses is not None:
            alpha, beta = dependence.witnesses
            witnesses = WitnessModel(alpha=alpha.tolist(), beta=beta.tolist())
        if result.prediction_scope == "sufficient-only":
            self.notes.append("the domain has no real points; the case analysis is only a sufficient condition")
        if dependence.indeterminate:
            self.notes.append("f_v^s vanishes identically but f_v does not; no witnesses are extracted")
        report = SumRuleReportModel(
            case=result.case.value,
            n=result.n,
            m=result.m,
            p=result.p,
            inner=finite_or_none(result.inner),
            parity_ok=result.parity_ok,
            commutes=dependence.dependent,
            indeterminate=dependence.indeterminate,
            wedge_sup=finite_or_none(dependence.wedge_sup),
            witnesses=witnesses,
            numeric_residual=finite_or_none(result.numeric_residual),
            threshold=result.threshold,
            predicted_equal=result.predicted_equal,
            measured_equal=result.measured_equal,
            prediction_scope=result.prediction_scope,
            disagreement=result.disagreement,
        )
        return "sum_rule", report, not result.disagreement

    def _sqrt(self, functions: List[SliceFunction]) -> Tuple[str, BaseModel, bool]:
        h = self._sqrt_input(functions)
        decision = has_sqrt(h)
        structure = decision.structure
        root = sqrt(h) if decision.has_sqrt else None
        square_residual = (root * root).distance(h) if root is not None else None
        report = SqrtReport(
            coeffs=h.to_list(),
            has_sqrt=decision.has_sqrt,
            reason=decision.reason,
            detail=decision.detail,
            structure=ZeroStructureModel(
                leading=structure.leading,
                real_roots=[RealRootModel(root=r, multiplicity=k) for r, k in structure.real_roots],
                spheres=[
                    SphereModel(a=a, b=b, multiplicity=m, spherical_multiplicity=2 * m)
                    for a, b, m in structure.spheres
                ],
                reconstruction_residual=finite_or_none(structure.reconstruction_residual(h)),
            ),
            sqrt=root.to_list() if root is not None else None,
            square_residual=finite_or_none(square_residual),
        )
        return "sqrt", report, decision.has_sqrt

    def _sqrt_input(self, functions: List[SliceFunction]) -> RealPolynomial:
        if self.spec.coeffs is not None:
            return RealPolynomial(self.spec.coeffs)
        f = functions[0]
        if f.polynomial is None or not f.polynomial.is_real:
            raise ValidationError(
                "sqrt jobs need a polynomial with real coefficients",
                error_code="NOT_SLICE_PRESERVING",
                context={"function": f.label},
            )
        return RealPolynomial(f.polynomial.real_coefficients())

    def _classify(self, functions: List[SliceFunction]) -> Tuple[str, BaseModel, bool]:
        f = functions[0]
        result = classify_exp(f, self.tol, self.grid_for(f.domain))
        report = ClassificationReport(
            kind=result.kind.value,
            unit=result.unit.to_list() if result.unit is not None else None,
            n=result.n,
            description=result.describe(),
        )
        return "classification", report, True


def _json_safe(value: Any) -> Any:
    return json.loads(json.dumps(value, default=str))


def error_report(
    error: Exception, command: Optional[Command] = None, context: Optional[Dict[str, Any]] = None
) -> JobReport:
    """Report for a job that could not be completed"""
    wrapped = ErrorHandler.handle_exception(error)
    details = ErrorHandler.format_error_response(wrapped)
    return JobReport(
        version=__version__,
        command=command,
        status=ReportStatus.ERROR,
        exit_code=details["exit_code"],
        error=ErrorInfo(
            error_code=details["error_code"],
            message=details["message"],
            severity=details["severity"],
            category=details["category"],
            context=_json_safe(details["context"]),
            cause=details.get("cause"),
        ),
        **(context or {}),
    )


def run_job(spec: JobSpec) -> JobReport:
    """Execute ``spec`` and return its report"""
    return JobRunner(spec).run()
