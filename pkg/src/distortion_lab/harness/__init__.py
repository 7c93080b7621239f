"""Command-line front end, sweeps and verification suites."""

from .core import (CSV_COLUMNS, RunResult, SweepConfig, bound_violations, draw_trials, format_rows,
                   parse_range, run_once, run_sweep, write_csv)
from .suites import SUITES, SuiteResult, run_suite, run_suites

__all__ = [
    "CSV_COLUMNS", "RunResult", "SUITES", "SuiteResult", "SweepConfig", "bound_violations",
    "draw_trials", "format_rows", "parse_range", "run_once", "run_suite", "run_suites",
    "run_sweep", "write_csv",
]
