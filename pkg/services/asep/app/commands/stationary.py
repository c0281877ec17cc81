"""
`stationary`: the full stationary law from the oracle, or the ansatz
observables (site occupancies and particle-count distribution).
"""
import argparse

from ..services import ansatz, oracle
from .args import asep_from_args
from .output import Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("stationary", parents=parents, help="stationary measure on N sites")
    parser.add_argument("--n", type=int, required=True, help="number of sites")
    parser.add_argument("--method", choices=("oracle", "ansatz"), default="oracle")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    emit = Emitter("stationary", args)
    asep = asep_from_args(args)
    if args.method == "oracle":
        table = oracle.stationary_table(asep, args.n)
        rows = sorted(
            (oracle.configuration_label(i, args.n), float(p)) for i, p in enumerate(table.probs)
        )
        emit.csv("stationary.csv", rows)
    else:
        profile = ansatz.profile_exact(asep, args.n)
        counts = ansatz.count_gf_poly(asep, args.n).probabilities
        rows = [("occupancy", j + 1, float(v)) for j, v in enumerate(profile)]
        rows += [("count", k, float(p)) for k, p in enumerate(counts)]
        emit.csv("observables.csv", rows)
    emit.finish()
    return 0
