"""
Command-line entry point.

Exit codes: 0 on success, 1 when `validate` finds a failing check, 2 for
parameter or domain errors (reported as an ErrorResponse JSON on stderr).
"""
import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .commands import MODEL_COMMANDS, validate
from .commands.args import output_parser, rate_parser
from .errors import AsepError
from .models import ErrorResponse

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asep",
        description="Exact stationary observables of the open-boundary exclusion process",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    outputs = output_parser()
    rates = rate_parser()
    for command in MODEL_COMMANDS:
        command.register(subparsers, [rates, outputs])
    validate.register(subparsers, [outputs])
    return parser


def _report(response: ErrorResponse) -> None:
    sys.stderr.write(json.dumps(response.model_dump(), default=str) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AsepError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        _report(exc.to_response())
    except ValidationError as exc:
        first = exc.errors()[0] if exc.errors() else {}
        _report(ErrorResponse(
            code="INVALID_PARAMETERS",
            message=str(first.get("msg", exc)),
            details={"field": ".".join(str(p) for p in first.get("loc", ()))},
        ))
    return EXIT_USAGE
