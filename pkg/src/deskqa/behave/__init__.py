"""Behavioural testing: MFT/INV suites, perturbations, reports."""

from .perturb import apply_perturbation, normalize
from .report import (
    FAILED_EXAMPLE_CAP,
    TestReport,
    TestResult,
    export_report,
    format_rate,
    parse_report,
)
from .runner import run_suite
from .suite import (
    BehaviouralTestSuite,
    Case,
    Test,
    bundled_suite,
    load_suite,
    load_suite_file,
    parse_suite,
)

__all__ = [
    "apply_perturbation",
    "normalize",
    "FAILED_EXAMPLE_CAP",
    "TestReport",
    "TestResult",
    "export_report",
    "format_rate",
    "parse_report",
    "run_suite",
    "BehaviouralTestSuite",
    "Case",
    "Test",
    "bundled_suite",
    "load_suite",
    "load_suite_file",
    "parse_suite",
]
