"""Command-line entry point."""

import argparse
import sys

from ..errors import ConsistencyError, InputError
from .report import EXIT_INPUT, EXIT_INTERNAL, emit_report
from .schema import TASKS, TaskRequest, parse_input
from .tasks import GOLDEN_DIR, run_task


def build_parser():
    parser = argparse.ArgumentParser(
        prog="atiyah-lab",
        description="Exact checks of Lie pairs, infinitesimal ideal systems and their Atiyah classes.",
    )
    parser.add_argument("--task", choices=TASKS, help="task to run (overrides the file's task field)")
    parser.add_argument("--input", metavar="FILE", help="problem file; '-' reads standard input")
    parser.add_argument("--format", choices=("text", "json"), help="report format (default json)")
    parser.add_argument("--degree-bound", type=int, metavar="N",
                        help="degree bound for primitive search and power-series frames")
    parser.add_argument("--regen-golden", action="store_true", help="rewrite golden files (catalog task)")
    parser.add_argument("--golden-dir", default=str(GOLDEN_DIR), help=argparse.SUPPRESS)
    return parser


def _load(args):
    if args.input is None:
        if args.task == "catalog":
            return TaskRequest("catalog")
        raise InputError("--input is required for this task")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    return parse_input(text, args.task)


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.regen_golden and args.task not in (None, "catalog"):
        print("error: --regen-golden applies to the catalog task only", file=sys.stderr)
        return EXIT_INPUT
    try:
        req = _load(args)
        if args.regen_golden and req.task != "catalog":
            raise InputError("--regen-golden applies to the catalog task only")
        if args.degree_bound is not None:
            if args.degree_bound < 0:
                raise InputError("--degree-bound must be non-negative")
            req.options["degree_bound"] = args.degree_bound
        fmt = args.format or req.options.get("format", "json")
        report = run_task(req, args.golden_dir, args.regen_golden)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    stdout.write(emit_report(report, fmt))
    return report.exit_code
