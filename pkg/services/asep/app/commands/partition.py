"""
`partition`: K_N from the matrix product and from the moment quadrature.
"""
import argparse

from ..models import PartitionReport
from ..services.ansatz import partition
from ..services.awdist import moment_power
from ..services.params import derive_aw
from .args import asep_from_args
from .output import Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("partition", parents=parents, help="normalization K_N by two routes")
    parser.add_argument("--n", type=int, required=True, help="number of sites")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    emit = Emitter("partition", args)
    asep = asep_from_args(args)
    aw = derive_aw(asep)
    by_ansatz = partition(asep, args.n)
    by_quadrature = moment_power(aw, 1.0, args.n) / (1.0 - asep.q) ** args.n
    emit.json(PartitionReport(
        N=args.n,
        K_N=by_ansatz,
        route_ansatz=by_ansatz,
        route_quadrature=by_quadrature,
        relative_gap=abs(by_quadrature - by_ansatz) / abs(by_ansatz),
    ))
    emit.finish()
    return 0
