"""
`validate`: run the acceptance suite; exit 1 when any check fails.
"""
import argparse

from ..services.validation import run_validation
from .output import Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("validate", parents=parents, help="run the acceptance checks")
    parser.add_argument("--level", choices=("quick", "full"), default="quick")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    emit = Emitter("validate", args)
    report = run_validation(args.level)
    emit.json(report)
    emit.finish()
    return 0 if report.passed else 1
