"""
Shared argument handling: the rate flags and grid strings.
"""
import argparse

import numpy as np

from ..errors import ParameterOutOfRange
from ..models import AsepParams


def rate_parser() -> argparse.ArgumentParser:
    """Parent parser carrying the five rates; every model subcommand inherits it."""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("rates")
    group.add_argument("--alpha", type=float, default=1.0, help="injection rate at site 1")
    group.add_argument("--beta", type=float, default=1.0, help="extraction rate at site N")
    group.add_argument("--gamma", type=float, default=0.0, help="extraction rate at site 1")
    group.add_argument("--delta", type=float, default=0.0, help="injection rate at site N")
    group.add_argument("--q", type=float, default=0.0, help="left hop rate, 0 <= q < 1")
    return parser


def output_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    parser.add_argument("--manifest", default=None, help="write the run manifest here")
    return parser


def asep_from_args(args: argparse.Namespace) -> AsepParams:
    return AsepParams(alpha=args.alpha, beta=args.beta, gamma=args.gamma, delta=args.delta, q=args.q)


def parse_grid(text: str) -> np.ndarray:
    """'lo:hi:step' -> inclusive grid from lo to hi."""
    try:
        lo, hi, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise ParameterOutOfRange(f"grid must look like lo:hi:step, got {text!r}", grid=text) from None
    if step <= 0 or hi < lo:
        raise ParameterOutOfRange(f"grid {text!r} needs step > 0 and hi >= lo", grid=text)
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def parse_times(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParameterOutOfRange(f"times must be comma-separated numbers, got {text!r}", times=text) from None
