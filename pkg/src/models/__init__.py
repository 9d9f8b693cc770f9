"""
Models package for slicexp

This package contains pydantic models for job specifications and reports.
"""

from .requests import Command, DomainSpec, GridSpec, JobSpec, ToleranceSpec
from .responses import (
    ClassificationReport,
    ErrorInfo,
    EvaluationReport,
    ExpReport,
    IdentityReport,
    JobReport,
    PointValue,
    ReportStatus,
    ResidualEntry,
    SqrtReport,
    SumRuleReportModel,
    ZeroStructureModel,
)

__all__ = [
    # Request models
    "Command",
    "DomainSpec",
    "GridSpec",
    "ToleranceSpec",
    "JobSpec",
    # Report models
    "ReportStatus",
    "ResidualEntry",
    "PointValue",
    "EvaluationReport",
    "ExpReport",
    "IdentityReport",
    "SumRuleReportModel",
    "ZeroStructureModel",
    "SqrtReport",
    "ClassificationReport",
    "ErrorInfo",
    "JobReport",
]
