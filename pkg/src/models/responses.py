"""
Report models for slicexp jobs

Every job produces one ``JobReport``. Reports are emitted as JSON and must
re-validate with ``JobReport.model_validate_json`` (the ``--check-report``
mode). Non-finite numbers are stored as null.
"""

import math
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .requests import Command, GridSpec


def finite_or_none(value: Optional[float]) -> Optional[float]:
    """JSON has no inf or nan; report them as null"""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


class ReportStatus(str, Enum):
    """Enumeration of report statuses."""
    OK = "ok"
    VIOLATION = "violation"
    ERROR = "error"


STATUS_EXIT_CODES = {ReportStatus.OK: 0, ReportStatus.VIOLATION: 1, ReportStatus.ERROR: 2}


class ResidualEntry(BaseModel):
    """One checked identity."""

    name: str = Field(..., description="Identity name")
    value: Optional[float] = Field(..., description="Measured grid residual")
    threshold: float = Field(..., ge=0.0, description="Acceptance threshold")
    passed: bool = Field(..., description="Whether value <= threshold")


class PointValue(BaseModel):
    """A function value at one quaternion point."""

    point: List[float] = Field(..., min_length=4, max_length=4)
    value: List[float] = Field(..., min_length=4, max_length=4)
    representation_residual: Optional[float] = Field(default=None, description="Representation formula residual")


class EvaluationReport(BaseModel):
    values: List[PointValue] = Field(default_factory=list)
    stem_symmetry_residual: Optional[float] = None
    max_representation_residual: Optional[float] = None
    threshold: float = Field(..., ge=0.0)
    passed: bool


class TruncationModel(BaseModel):
    n_terms: int = Field(..., ge=0)
    bound_m: Optional[float] = None
    remainder_bound: Optional[float] = None


class ExpReport(BaseModel):
    """Closed form against the truncated series and the f0/f_v factorization."""

    truncation: TruncationModel
    dual_path_residual: Optional[float] = None
    factorized_residual: Optional[float] = None
    threshold: float = Field(..., ge=0.0)
    agree: bool
    sup_norm: Optional[float] = None
    values: List[PointValue] = Field(default_factory=list)


class IdentityReport(BaseModel):
    method: Literal["closed", "series"] = "closed"
    residuals: List[ResidualEntry] = Field(default_factory=list)
    threshold: float = Field(..., ge=0.0)
    min_norm: Optional[float] = Field(default=None, description="Grid minimum of |exp_*(f)|")
    norm_bound: Optional[float] = Field(default=None, description="Lower bound for |exp_*(f)| from exp(2 Re f0)")
    never_vanishing: bool
    passed: bool


class WitnessModel(BaseModel):
    """Real coefficients (ascending) of alpha, beta with alpha f_v + beta g_v = 0."""

    alpha: List[float]
    beta: List[float]


class SumRuleReportModel(BaseModel):
    case: Literal["linear-dependent", "pythagorean", "fails"]
    n: Optional[int] = None
    m: Optional[int] = None
    p: Optional[int] = None
    inner: Optional[float] = None
    parity_ok: Optional[bool] = None
    commutes: bool
    indeterminate: bool = False
    wedge_sup: Optional[float] = None
    witnesses: Optional[WitnessModel] = None
    numeric_residual: Optional[float] = None
    threshold: float = Field(..., ge=0.0)
    predicted_equal: bool
    measured_equal: bool
    prediction_scope: Literal["necessary-and-sufficient", "sufficient-only"]
    disagreement: bool


class RealRootModel(BaseModel):
    root: float
    multiplicity: int = Field(..., ge=1)


class SphereModel(BaseModel):
    a: float
    b: float = Field(..., gt=0.0)
    multiplicity: int = Field(..., ge=1)
    spherical_multiplicity: int = Field(..., ge=2)

    @model_validator(mode="after")
    def validate_even(self) -> "SphereModel":
        if self.spherical_multiplicity != 2 * self.multiplicity:
            raise ValueError("spherical multiplicity must be twice the factor multiplicity")
        return self


class ZeroStructureModel(BaseModel):
    leading: float
    real_roots: List[RealRootModel] = Field(default_factory=list)
    spheres: List[SphereModel] = Field(default_factory=list)
    reconstruction_residual: Optional[float] = None


class SqrtReport(BaseModel):
    coeffs: List[float] = Field(..., min_length=1)
    has_sqrt: bool
    reason: str
    detail: str = ""
    structure: ZeroStructureModel
    sqrt: Optional[List[float]] = None
    square_residual: Optional[float] = None


class ClassificationReport(BaseModel):
    kind: Literal["slice-preserving", "CJ-preserving", "generic"]
    unit: Optional[List[float]] = Field(default=None, description="Detected J for CJ-preserving exponentials")
    n: Optional[int] = Field(default=None, description="n with f_v^s = n^2 pi^2")
    description: str


class ErrorInfo(BaseModel):
    error_code: str
    message: str
    severity: str
    category: str
    context: Dict[str, Any] = Field(default_factory=dict)
    cause: Optional[str] = Field(default=None, description="Type of the underlying exception")


SECTIONS = {
    Command.EVAL: "evaluation",
    Command.EXP: "exp",
    Command.IDENTITIES: "identities",
    Command.SUM_RULE: "sum_rule",
    Command.SQRT: "sqrt",
    Command.CLASSIFY: "classification",
}


class JobReport(BaseModel):
    """
    Outcome of one job.

    ``status`` and ``exit_code`` agree (ok 0, violation 1, error 2); a
    non-error report carries the section of its command.
    """

    tool: str = "slicexp"
    version: str
    command: Optional[Command] = None
    status: ReportStatus
    exit_code: int = Field(..., ge=0, le=2)
    functions: List[str] = Field(default_factory=list, description="Function labels")
    domain: Optional[Dict[str, Any]] = None
    grid: Optional[GridSpec] = None
    tolerances: Dict[str, float] = Field(default_factory=dict)
    seed: Optional[int] = None
    created_at: datetime = Field(default_factory=datetime.now)

    evaluation: Optional[EvaluationReport] = None
    exp: Optional[ExpReport] = None
    identities: Optional[IdentityReport] = None
    sum_rule: Optional[SumRuleReportModel] = None
    sqrt: Optional[SqrtReport] = None
    classification: Optional[ClassificationReport] = None

    error: Optional[ErrorInfo] = None
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_consistency(self) -> "JobReport":
        """Validate status, exit code and sections against each other."""
        if STATUS_EXIT_CODES[self.status] != self.exit_code:
            raise ValueError(f"exit_code {self.exit_code} does not match status {self.status.value}")
        if (self.status is ReportStatus.ERROR) != (self.error is not None):
            raise ValueError("error details must be present exactly when status is error")
        if self.status is not ReportStatus.ERROR:
            if self.command is None or getattr(self, SECTIONS[self.command]) is None:
                raise ValueError("report is missing the section of its command")
        return self
