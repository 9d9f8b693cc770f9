"""
Unit Tests for Job and Report Models

Covers flag parsing for domains and grids, payload validation of jobs and the
consistency rules of reports.
"""

import math

import pytest
from pydantic import ValidationError as PydanticValidationError

from src.hypercomplex.slicefn import DomainKind
from src.models.requests import Command, DomainSpec, GridSpec, JobSpec
from src.models.responses import (
    ClassificationReport,
    ErrorInfo,
    JobReport,
    ReportStatus,
    SphereModel,
    STATUS_EXIT_CODES,
    finite_or_none,
)

IDENTITY = {"op": "id"}


def _classification() -> ClassificationReport:
    return ClassificationReport(kind="slice-preserving", description="real coefficients")


@pytest.mark.unit
class TestDomainSpec:
    """Test domain flags and conversion"""

    @pytest.mark.parametrize(
        "flag,kind",
        [
            ("whole", DomainKind.WHOLE_PLANE),
            ("minus-real", DomainKind.PLANE_MINUS_REAL),
            ("rect:-1,1,1", DomainKind.RECTANGLE),
            ("rect-minus-real:0,2,0.5", DomainKind.RECTANGLE_MINUS_REAL),
        ],
    )
    def test_from_flag(self, flag, kind):
        """Test every accepted flag form"""
        spec = DomainSpec.from_flag(flag)
        assert spec.kind is kind
        assert spec.to_domain().kind is kind

    def test_rectangle_bounds(self):
        """Test the bounds reach the planar domain"""
        domain = DomainSpec.from_flag("rect:-1,3,0.5").to_domain()
        assert (domain.alpha_min, domain.alpha_max, domain.beta_max) == (-1.0, 3.0, 0.5)
        assert domain.contains_real

    @pytest.mark.parametrize("flag", ["disk", "rect", "rect:1,2", "rect:a,b,c"])
    def test_unrecognized(self, flag):
        """Test malformed flags"""
        with pytest.raises(ValueError):
            DomainSpec.from_flag(flag)

    def test_empty_rectangle(self):
        """Test alpha_min >= alpha_max is rejected"""
        with pytest.raises(PydanticValidationError):
            DomainSpec.from_flag("rect:1,1,1")

    def test_bounds_ignored_for_planes(self):
        """Test whole-plane domains do not check the rectangle bounds"""
        spec = DomainSpec(kind=DomainKind.WHOLE_PLANE, alpha_min=3.0, alpha_max=1.0)
        assert spec.to_domain().kind is DomainKind.WHOLE_PLANE


@pytest.mark.unit
class TestGridSpec:
    """Test grid flags"""

    def test_from_flag(self):
        """Test NAxNB parsing"""
        grid = GridSpec.from_flag("31X11")
        assert (grid.n_alpha, grid.n_beta) == (31, 11)

    def test_missing_separator(self):
        """Test a flag without x"""
        with pytest.raises(ValueError):
            GridSpec.from_flag("21")

    def test_too_small(self):
        """Test grids need at least two points per axis"""
        with pytest.raises(PydanticValidationError):
            GridSpec.from_flag("1x5")


@pytest.mark.unit
class TestJobSpec:
    """Test job payload validation"""

    def test_defaults(self):
        """Test a minimal classify job"""
        job = JobSpec.model_validate({"command": "classify", "functions": [IDENTITY]})
        assert job.command is Command.CLASSIFY
        assert job.method == "closed"
        assert job.domain.kind is DomainKind.RECTANGLE
        assert (job.grid.n_alpha, job.grid.n_beta) == (21, 21)
        assert job.seed is None and job.tolerances.eval is None

    def test_sqrt_payloads(self):
        """Test sqrt jobs take coefficients or one function"""
        assert JobSpec.model_validate({"command": "sqrt", "coeffs": [1, 0, 1]}).coeffs == [1.0, 0.0, 1.0]
        assert len(JobSpec.model_validate({"command": "sqrt", "functions": [IDENTITY]}).functions) == 1

    @pytest.mark.parametrize(
        "payload",
        [
            {"command": "sum-rule", "functions": [IDENTITY]},
            {"command": "exp", "functions": []},
            {"command": "eval", "functions": [IDENTITY]},
            {"command": "eval", "functions": [IDENTITY], "points": [[0, 1, 0]]},
            {"command": "sqrt"},
            {"command": "sqrt", "coeffs": [0, 0]},
            {"command": "classify", "functions": [IDENTITY], "seed": -1},
            {"command": "identities", "functions": [IDENTITY], "method": "pade"},
            {"command": "classify", "functions": [IDENTITY], "colour": "red"},
            {"command": "integrate", "functions": [IDENTITY]},
        ],
        ids=[
            "sum-rule-one-function",
            "exp-no-function",
            "eval-no-points",
            "eval-short-point",
            "sqrt-empty",
            "sqrt-zero",
            "negative-seed",
            "unknown-method",
            "extra-field",
            "unknown-command",
        ],
    )
    def test_invalid_jobs(self, payload):
        """Test payloads each command rejects"""
        with pytest.raises(PydanticValidationError):
            JobSpec.model_validate(payload)

    def test_nested_specs(self):
        """Test domain, grid and tolerance blocks"""
        job = JobSpec.model_validate(
            {
                "command": "exp",
                "functions": [IDENTITY],
                "domain": {"kind": "rectangle-minus-real-axis", "alpha_min": -1, "alpha_max": 1, "beta_max": 1},
                "grid": {"n_alpha": 5, "n_beta": 7},
                "tolerances": {"eval": 1e-8},
                "seed": 3,
            }
        )
        assert job.domain.to_domain().kind is DomainKind.RECTANGLE_MINUS_REAL
        assert job.grid.n_beta == 7
        assert job.tolerances.eval == 1e-8 and job.tolerances.series is None


@pytest.mark.unit
class TestReports:
    """Test report consistency rules"""

    def test_finite_or_none(self):
        """Test non-finite numbers become null"""
        assert finite_or_none(1.5) == 1.5
        assert finite_or_none(math.inf) is None
        assert finite_or_none(math.nan) is None
        assert finite_or_none(None) is None

    def test_exit_codes(self):
        """Test the status to exit code table"""
        assert STATUS_EXIT_CODES == {ReportStatus.OK: 0, ReportStatus.VIOLATION: 1, ReportStatus.ERROR: 2}

    def test_valid_report_round_trip(self):
        """Test a report re-validates from its own JSON"""
        report = JobReport(
            version="1.0.0",
            command=Command.CLASSIFY,
            status=ReportStatus.OK,
            exit_code=0,
            classification=_classification(),
        )
        again = JobReport.model_validate_json(report.model_dump_json())
        assert again.classification.kind == "slice-preserving"
        assert again.tool == "slicexp"

    def test_exit_code_mismatch(self):
        """Test status and exit code must agree"""
        with pytest.raises(PydanticValidationError):
            JobReport(
                version="1.0.0",
                command=Command.CLASSIFY,
                status=ReportStatus.OK,
                exit_code=1,
                classification=_classification(),
            )

    def test_missing_section(self):
        """Test non-error reports carry their section"""
        with pytest.raises(PydanticValidationError):
            JobReport(version="1.0.0", command=Command.SQRT, status=ReportStatus.VIOLATION, exit_code=1)

    def test_error_details(self):
        """Test error reports need error details and others must not have them"""
        error = ErrorInfo(error_code="UNKNOWN_OP", message="bad op", severity="low", category="input")
        report = JobReport(version="1.0.0", status=ReportStatus.ERROR, exit_code=2, error=error)
        assert report.command is None
        with pytest.raises(PydanticValidationError):
            JobReport(version="1.0.0", status=ReportStatus.ERROR, exit_code=2)
        with pytest.raises(PydanticValidationError):
            JobReport(
                version="1.0.0",
                command=Command.CLASSIFY,
                status=ReportStatus.OK,
                exit_code=0,
                classification=_classification(),
                error=error,
            )

    def test_sphere_parity(self):
        """Test spherical multiplicities are twice the factor multiplicity"""
        assert SphereModel(a=0.0, b=1.0, multiplicity=2, spherical_multiplicity=4).spherical_multiplicity == 4
        with pytest.raises(PydanticValidationError):
            SphereModel(a=0.0, b=1.0, multiplicity=1, spherical_multiplicity=3)
