"""Benchmark harness: dataset generation, evaluation runs, reports."""

from .report import REPORT_SCHEMA, Condition, Report, format_report, report_emit
from .rouge import lcs_length, rouge_l, rouge_l_text, rouge_tokens
from .runner import measure_latency_pair, run_suite
from .suites import Suite, SuiteInstance, generate_suite, select_diverse

__all__ = [
    "REPORT_SCHEMA",
    "Condition",
    "Report",
    "Suite",
    "SuiteInstance",
    "format_report",
    "generate_suite",
    "lcs_length",
    "measure_latency_pair",
    "report_emit",
    "rouge_l",
    "rouge_l_text",
    "rouge_tokens",
    "run_suite",
    "select_diverse",
]
