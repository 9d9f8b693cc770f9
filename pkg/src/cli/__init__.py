"""
Command-line front end for slicexp

Job execution and report rendering.
"""

from .commands import JobRunner, error_report, run_job
from .reporting import check_report, render_json, render_text, write_report

__all__ = [
    "JobRunner",
    "run_job",
    "error_report",
    "render_text",
    "render_json",
    "write_report",
    "check_report",
]
