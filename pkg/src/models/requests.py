"""
Request models for slicexp jobs

This module defines the pydantic model of a verification job as read from a
JSON file or assembled from command-line flags, with validation of the grid,
the tolerances and the payload each command needs.
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..hypercomplex.slicefn import DomainKind, PlanarDomain


class Command(str, Enum):
    """Enumeration of supported job commands."""
    EVAL = "eval"
    EXP = "exp"
    IDENTITIES = "identities"
    SUM_RULE = "sum-rule"
    SQRT = "sqrt"
    CLASSIFY = "classify"


FUNCTION_COUNT = {
    Command.EVAL: 1,
    Command.EXP: 1,
    Command.IDENTITIES: 1,
    Command.SUM_RULE: 2,
    Command.CLASSIFY: 1,
}


class DomainSpec(BaseModel):
    """
    Planar domain of a job.

    Bounds are only read for the rectangle kinds.
    """

    model_config = ConfigDict(extra="forbid")

    kind: DomainKind = Field(default=DomainKind.RECTANGLE, description="Domain kind")
    alpha_min: float = Field(default=-2.0, description="Lower real bound")
    alpha_max: float = Field(default=2.0, description="Upper real bound")
    beta_max: float = Field(default=2.0, gt=0.0, description="Half height")

    @model_validator(mode="after")
    def validate_bounds(self) -> "DomainSpec":
        """Rectangles must have alpha_min < alpha_max."""
        if self.kind in (DomainKind.RECTANGLE, DomainKind.RECTANGLE_MINUS_REAL) and self.alpha_min >= self.alpha_max:
            raise ValueError("alpha_min must be smaller than alpha_max")
        return self

    @classmethod
    def from_flag(cls, text: str) -> "DomainSpec":
        """
        Parse ``whole``, ``minus-real``, ``rect:amin,amax,bmax`` or
        ``rect-minus-real:amin,amax,bmax``.
        """
        text = text.strip()
        if text == "whole":
            return cls(kind=DomainKind.WHOLE_PLANE)
        if text == "minus-real":
            return cls(kind=DomainKind.PLANE_MINUS_REAL)
        name, _, bounds = text.partition(":")
        kinds = {"rect": DomainKind.RECTANGLE, "rect-minus-real": DomainKind.RECTANGLE_MINUS_REAL}
        if name not in kinds or not bounds:
            raise ValueError(f"Unrecognized domain '{text}'")
        values = [float(v) for v in bounds.split(",")]
        if len(values) != 3:
            raise ValueError("Rectangle domains need amin,amax,bmax")
        return cls(kind=kinds[name], alpha_min=values[0], alpha_max=values[1], beta_max=values[2])

    def to_domain(self) -> PlanarDomain:
        if self.kind is DomainKind.WHOLE_PLANE:
            return PlanarDomain.whole_plane()
        if self.kind is DomainKind.PLANE_MINUS_REAL:
            return PlanarDomain.plane_minus_real()
        return PlanarDomain.rectangle(
            self.alpha_min,
            self.alpha_max,
            self.beta_max,
            minus_real=self.kind is DomainKind.RECTANGLE_MINUS_REAL,
        )


class GridSpec(BaseModel):
    """Sampling grid dimensions."""

    model_config = ConfigDict(extra="forbid")

    n_alpha: int = Field(default=21, ge=2, le=2001, description="Points along the real axis")
    n_beta: int = Field(default=21, ge=2, le=2001, description="Points along the imaginary axis")

    @classmethod
    def from_flag(cls, text: str) -> "GridSpec":
        """Parse ``NAxNB``"""
        n_alpha, sep, n_beta = text.lower().partition("x")
        if not sep:
            raise ValueError(f"Grid must look like 21x21, got '{text}'")
        return cls(n_alpha=int(n_alpha), n_beta=int(n_beta))


class ToleranceSpec(BaseModel):
    """Per-job tolerance overrides; None keeps the configured default."""

    model_config = ConfigDict(extra="forbid")

    eval: Optional[float] = Field(default=None, gt=0.0, description="Evaluation tolerance")
    series: Optional[float] = Field(default=None, gt=0.0, description="Series remainder target")


class JobSpec(BaseModel):
    """
    A single verification job.

    ``functions`` holds expression trees; ``coeffs`` holds the real
    coefficients of a ``sqrt`` job (ascending powers).
    """

    model_config = ConfigDict(extra="forbid")

    command: Command = Field(..., description="Job command")
    functions: List[Dict[str, Any]] = Field(default_factory=list, description="Expression trees")
    points: List[List[float]] = Field(default_factory=list, description="Quaternion points [w, x, y, z]")
    coeffs: Optional[List[float]] = Field(default=None, description="Real coefficients for sqrt jobs")
    method: Literal["closed", "series"] = Field(default="closed", description="Exponential used by identities")
    domain: DomainSpec = Field(default_factory=DomainSpec)
    grid: GridSpec = Field(default_factory=GridSpec)
    tolerances: ToleranceSpec = Field(default_factory=ToleranceSpec)
    seed: Optional[int] = Field(default=None, ge=0, description="Grid jitter and sample seed")
    output: Optional[str] = Field(default=None, description="Report path; stdout when omitted")

    @field_validator("points")
    @classmethod
    def validate_points(cls, v: List[List[float]]) -> List[List[float]]:
        """Each point is a 4-array."""
        for point in v:
            if len(point) != 4:
                raise ValueError("points must be 4-arrays [w, x, y, z]")
        return v

    @field_validator("coeffs")
    @classmethod
    def validate_coeffs(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and (not v or not any(v)):
            raise ValueError("coeffs must describe a nonzero polynomial")
        return v

    @model_validator(mode="after")
    def validate_payload(self) -> "JobSpec":
        """Check the payload each command needs."""
        if self.command is Command.SQRT:
            if self.coeffs is None and len(self.functions) != 1:
                raise ValueError("sqrt jobs need coeffs or exactly one polynomial function")
            return self
        expected = FUNCTION_COUNT[self.command]
        if len(self.functions) != expected:
            raise ValueError(f"{self.command.value} jobs need exactly {expected} function(s)")
        if self.command is Command.EVAL and not self.points:
            raise ValueError("eval jobs need at least one point")
        return self
