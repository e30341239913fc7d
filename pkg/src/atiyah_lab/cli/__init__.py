"""Batch front-end: problem file in, canonical report out."""

from .main import build_parser, main
from .report import Report, emit_report
from .schema import TaskRequest, dump_document, dump_problem, parse_document, parse_input
from .tasks import request_for_entry, run_task

__all__ = [
    "Report",
    "TaskRequest",
    "build_parser",
    "dump_document",
    "dump_problem",
    "emit_report",
    "main",
    "parse_document",
    "parse_input",
    "request_for_entry",
    "run_task",
]
