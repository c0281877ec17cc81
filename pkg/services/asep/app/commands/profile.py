"""
`profile`: exact mean occupancy of every site.
"""
import argparse

from ..services.ansatz import profile_exact
from .args import asep_from_args
from .output import Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("profile", parents=parents, help="density profile on N sites")
    parser.add_argument("--n", type=int, required=True, help="number of sites")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    emit = Emitter("profile", args)
    profile = profile_exact(asep_from_args(args), args.n)
    emit.csv("profile.csv", [(j + 1, float(v)) for j, v in enumerate(profile)])
    emit.finish()
    return 0
