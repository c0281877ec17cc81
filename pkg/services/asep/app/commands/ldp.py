"""
`ldp`: cumulant function Lambda or rate function I on a grid, optionally
next to their finite-N counterparts from the exact count distribution.
"""
import argparse
import math

from ..services import ldp
from ..services.ansatz import count_gf_poly
from ..services.params import derive_aw
from .args import asep_from_args, parse_grid
from .output import Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("ldp", parents=parents, help="large-deviation functions on a grid")
    grid = parser.add_mutually_exclusive_group(required=True)
    grid.add_argument("--lambda", dest="lambda_grid", metavar="LO:HI:STEP", help="grid of lambda values")
    grid.add_argument("--rate", dest="rate_grid", metavar="LO:HI:STEP", help="grid of densities x")
    parser.add_argument("--empirical-n", type=int, default=None, help="add the finite-N column for N sites")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    emit = Emitter("ldp", args)
    asep = asep_from_args(args)
    aw = derive_aw(asep)
    N = args.empirical_n
    poly = count_gf_poly(asep, N) if N else None

    if args.lambda_grid is not None:
        grid = parse_grid(args.lambda_grid)
        if poly is None:
            emit.csv("lambda.csv", [(float(lam), ldp.Lambda(lam, aw)) for lam in grid])
        else:
            emit.csv("lambda_empirical.csv", [
                (float(lam), ldp.Lambda(lam, aw), ldp.empirical_Lambda(asep, N, lam, poly)) for lam in grid
            ])
    else:
        grid = parse_grid(args.rate_grid)
        if poly is None:
            emit.csv("rate.csv", [(float(x), ldp.rate_I(x, aw)) for x in grid])
        else:
            half = (grid[1] - grid[0]) / 2.0 if len(grid) > 1 else 1.0 / N
            rows = []
            for x in grid:
                window = ldp.ldp_window(asep, N, x - half, x + half, poly)
                rows.append((float(x), ldp.rate_I(x, aw), -window if math.isfinite(window) else math.inf))
            emit.csv("rate_empirical.csv", rows)
    emit.finish()
    return 0
