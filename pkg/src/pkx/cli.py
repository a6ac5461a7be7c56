"""Command-line front end.

Exit codes: 0 success, 2 parse or usage error, 3 essential singularity,
4 resource exhaustion, 5 any other mathematical error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import expr as ex
from .controller import Budget, default_iterations, dominant_term_of, expand_expr, n_terms
from .errors import EssentialSingularity, ParseError, PkxError, ResourceExhausted
from .frames import make_frame
from .parser import parse

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ESSENTIAL = 3
EXIT_EXHAUSTED = 4
EXIT_MATH = 5


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = 0
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def parse_point(text: str):
    """'inf', '-inf', 'd*inf' for a direction d, or a finite constant expression."""
    t = text.strip().replace(" ", "")
    if t in ("inf", "+inf", "oo"):
        return "inf"
    if t in ("-inf", "-oo"):
        return "-inf"
    for suffix in ("*inf", "*oo"):
        if t.endswith(suffix):
            return ("dir", parse(t[: -len(suffix)]))
    value = parse(t)
    if ex.free_symbols(value) - {"pi"}:
        raise UsageError(f"expansion point must be a constant: {text!r}")
    return value


def _common(p):
    p.add_argument("expression")
    p.add_argument("--var", default="z", help="expansion variable (default z)")
    p.add_argument("--at", default="0", help="point: rational, inf, -inf or I*inf")
    p.add_argument("--from-left", action="store_true",
                   help="approach a finite point from below")
    p.add_argument("--real", default="", metavar="VARS",
                   help="comma-separated symbols assumed real")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkx", description="Generalized Puiseux series expansion")
    parser.add_argument("--budget", type=_positive_int, default=None,
                        help="iteration budget per node (default from PKX_BUDGET or 24)")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("expand", help="all terms through a requested order")
    _common(p)
    p.add_argument("--order", type=_fraction, required=True, help="exact rational, e.g. 5 or 1/1000")
    p = sub.add_parser("nterms", help="the first N nonzero terms")
    _common(p)
    p.add_argument("--terms", type=_positive_int, required=True)
    p = sub.add_parser("dominant", help="the dominant term")
    _common(p)
    p = sub.add_parser("batch", help="one expression per line, NDJSON output")
    p.add_argument("file", help="input file, or - for standard input")
    p.add_argument("--var", default="z")
    p.add_argument("--at", default="0")
    p.add_argument("--from-left", action="store_true")
    p.add_argument("--real", default="", metavar="VARS")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--order", type=_fraction)
    mode.add_argument("--terms", type=_positive_int)
    return parser


def _frame(args, e):
    real = [v for v in args.real.split(",") if v]
    return make_frame(args.var, parse_point(args.at), from_left=args.from_left,
                      real_vars=real, expr=e)


def _run_one(command, text, args, budget):
    e = parse(text)
    frame = _frame(args, e)
    if command == "expand":
        return expand_expr(e, frame, args.order, budget)
    if command == "nterms":
        return n_terms(e, frame, args.terms, budget)
    return dominant_term_of(e, frame, budget)


def exit_code_for(err: BaseException) -> int:
    if isinstance(err, (ParseError, UsageError)):
        return EXIT_USAGE
    if isinstance(err, EssentialSingularity):
        return EXIT_ESSENTIAL
    if isinstance(err, ResourceExhausted):
        return EXIT_EXHAUSTED
    return EXIT_MATH


def error_object(err: BaseException) -> dict:
    return {"error": type(err).__name__, "message": str(err), "exit_code": exit_code_for(err)}


def _batch(args, budget, out) -> int:
    stream = sys.stdin if args.file == "-" else open(args.file, encoding="utf-8")
    command = "expand" if args.order is not None else "nterms"
    worst = EXIT_OK
    with stream:
        for lineno, line in enumerate(stream, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                result = _run_one(command, text, args, budget)
                obj = {"line": lineno, "input": text, "result": result.json_obj()}
            except (PkxError, UsageError) as err:
                obj = {"line": lineno, "input": text, **error_object(err)}
                worst = max(worst, exit_code_for(err))
            out.write(json.dumps(obj) + "\n")
    return worst


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    budget = Budget(args.budget) if args.budget else Budget(default_iterations())
    if args.command == "batch":
        try:
            return _batch(args, budget, out)
        except OSError as exc:
            err.write(f"pkx: {exc}\n")
            return EXIT_USAGE
    try:
        result = _run_one(args.command, args.expression, args, budget)
    except (PkxError, UsageError) as exc:
        err.write(f"pkx: {type(exc).__name__}: {exc}\n")
        return exit_code_for(exc)
    out.write((result.json() if args.format == "json" else result.text()) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    code = run(argv)
    sys.exit(code)


if __name__ == "__main__":
    main()
