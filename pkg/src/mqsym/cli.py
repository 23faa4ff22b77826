"""Command-line entry point.

Subcommands: ``run`` (script file), ``eval`` (inline source), ``fuzz``
(oracle harness), ``fmt`` (canonical re-render).  Exit codes: 0 success,
1 any query error or verification failure, 2 parse/config errors.
Identical configuration (including seed) produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dsl, fuzz, interp
from .errors import MeasurementAlgebraError, ParseError


def _color_enabled() -> bool:
    return os.environ.get("MQSYM_COLOR", "0") == "1"


def _diagnostic(message: str, span=None, source_name: str | None = None):
    location = ""
    if span is not None:
        line, col, _ = span
        where = f"{source_name or '<input>'}:{line}:{col}"
        location = f"{where}: "
    text = f"error: {location}{message}"
    if _color_enabled():
        text = f"\x1b[31m{text}\x1b[0m"
    print(text, file=sys.stderr)


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"dims must look like 2..5, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}")
    return lo, hi


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("cases must be at least 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mqsym",
        description="Measurement-symbol algebra: scripts, inline "
                    "evaluation, and the oracle fuzz harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_basis=True):
        if with_basis:
            p.add_argument("--basis", metavar="PATH",
                           help="JSON basis file (realization)")
        p.add_argument("--tol", type=_positive_float, default=None,
                       metavar="FLOAT", help="tolerance override")
        p.add_argument("--seed", type=int, default=0, metavar="INT",
                       help="seed for random realizations")
        p.add_argument("--output", choices=("text", "json"), default="text")

    run_p = sub.add_parser("run", help="run a script file")
    run_p.add_argument("script", metavar="PATH")
    common(run_p)

    eval_p = sub.add_parser("eval", help="evaluate inline statements")
    eval_p.add_argument("-e", "--expr", required=True, metavar="SOURCE",
                        help="inline statements (observables may be "
                             "auto-declared from the states they mention)")
    common(eval_p)

    fuzz_p = sub.add_parser("fuzz", help="random-expression oracle harness")
    fuzz_p.add_argument("--dims", type=_parse_dims, default=(2, 5),
                        metavar="LO..HI")
    fuzz_p.add_argument("--cases", type=_positive_int, default=1000,
                        metavar="N")
    fuzz_p.add_argument("--seed", type=int, default=0, metavar="INT")
    fuzz_p.add_argument("--tol", type=_positive_float, default=None,
                        metavar="FLOAT")
    fuzz_p.add_argument("--output", choices=("text", "json"), default="text")

    fmt_p = sub.add_parser("fmt", help="canonical re-render of a script")
    fmt_p.add_argument("script", metavar="PATH")
    return parser


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise MeasurementAlgebraError(f"cannot read {path!r}: {exc}") from None


def _load_basis(path: str | None) -> dict | None:
    if path is None:
        return None
    text = _read_file(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"basis file {path!r} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ParseError(f"basis file {path!r} must hold a JSON object")
    return data


def _emit_outcomes(outcomes, output: str, source_name: str) -> int:
    status = 0
    for outcome in outcomes:
        if output == "json":
            obj = {"query": outcome.query}
            if outcome.ok:
                obj["result"] = outcome.json_value
                if outcome.deviation is not None:
                    obj["deviation"] = outcome.deviation
            else:
                obj["error"] = outcome.error
            print(json.dumps(obj))
        else:
            if outcome.ok:
                print(outcome.text)
        if not outcome.ok:
            if output != "json":
                _diagnostic(outcome.error, outcome.span, source_name)
            status = 1
    return status


def _run_source(source: str, source_name: str, args,
                auto_declare: bool) -> int:
    try:
        stmts = dsl.parse(source)
        basis = _load_basis(getattr(args, "basis", None))
        outcomes = interp.execute(stmts, basis, tolerance=args.tol,
                                  seed=args.seed, auto_declare=auto_declare)
    except MeasurementAlgebraError as exc:
        _diagnostic(exc.message, exc.span, source_name)
        return 2
    return _emit_outcomes(outcomes, args.output, source_name)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "run":
        try:
            source = _read_file(args.script)
        except MeasurementAlgebraError as exc:
            _diagnostic(exc.message)
            return 2
        return _run_source(source, args.script, args, auto_declare=False)

    if args.command == "eval":
        return _run_source(args.expr, "<eval>", args, auto_declare=True)

    if args.command == "fuzz":
        config = fuzz.FuzzConfig(
            dims=args.dims, cases=args.cases, seed=args.seed,
            tolerance=args.tol if args.tol is not None
            else fuzz.ORACLE_TOLERANCE)
        summary = fuzz.run_fuzz(config)
        if args.output == "json":
            print(json.dumps(fuzz.summary_json(summary)))
        else:
            print(fuzz.render_summary(summary))
        return 0 if summary.passed else 1

    if args.command == "fmt":
        try:
            source = _read_file(args.script)
            stmts = dsl.parse(source)
        except MeasurementAlgebraError as exc:
            _diagnostic(exc.message, exc.span, args.script)
            return 2
        sys.stdout.write(dsl.render_program(stmts))
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
