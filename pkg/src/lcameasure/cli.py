"""Command line front end.

Exit codes: 0 success, 1 invalid input, 2 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .problem import ProblemError, parse_function, parse_problem
from .report import (
    CrossCheckError,
    classify_document,
    decompose_document,
    h_table_document,
    orthogonality_document,
    project_document,
)
from .selftest import run_selftest

COMMANDS = ("classify", "decompose", "h-table", "project", "check-orthogonality", "selftest")


class UsageError(ValueError):
    pass


def _parse_residues(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(r) for r in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--x: cannot read residues from {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="problem JSON file (default: stdin)")
    common.add_argument("--x", help="dual element as comma-separated residues (project)")
    common.add_argument("--function", help="function JSON file (project)")
    common.add_argument("--alpha", type=float, default=2.0, help="exponent for the reported norm ratio")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--trials", type=int, default=20, help="random trials per selftest check")

    parser = argparse.ArgumentParser(prog="lcameasure", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _read(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def dispatch(args: argparse.Namespace) -> dict:
    if args.command == "selftest":
        return run_selftest(args.seed, args.trials)

    spec = parse_problem(_read(args.input))
    if args.command == "classify":
        return classify_document(spec)
    if args.command == "decompose":
        return decompose_document(spec)
    if args.command == "h-table":
        return h_table_document(spec)
    if args.command == "check-orthogonality":
        return orthogonality_document(spec)
    if args.command == "project":
        if args.x is None or args.function is None:
            raise UsageError("project needs --x and --function")
        x = _parse_residues(args.x)
        f = parse_function(_read(args.function), spec.mu)
        return project_document(spec, x, f, args.alpha)
    raise UsageError(f"unknown command {args.command!r}")


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = dispatch(args)
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return 2
    except (ProblemError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if args.command == "selftest" and doc["failed"]:
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
