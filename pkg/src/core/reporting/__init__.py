"""Curve files and the acceptance report."""

from .curve_io import sidecar_path, write_curve
from .validation import ValidationCheck, Validator, convergence_slope, oracle_deviations, render_report

__all__ = [
    "ValidationCheck",
    "Validator",
    "convergence_slope",
    "oracle_deviations",
    "render_report",
    "sidecar_path",
    "write_curve",
]
