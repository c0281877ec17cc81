"""
`simulate`: event-driven simulation on N sites; SimResult JSON plus a
profile CSV with batch-means standard errors.
"""
import argparse
from pathlib import Path

from ..models import SimConfig
from ..tasks import ReplicaPool
from .args import asep_from_args
from .output import STDOUT, Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("simulate", parents=parents, help="Monte Carlo simulation")
    parser.add_argument("--n", type=int, required=True, help="number of sites")
    parser.add_argument("--time", type=float, required=True, help="total simulated time")
    parser.add_argument("--burnin", type=float, default=0.0, help="time discarded before measuring")
    parser.add_argument("--seed", type=int, default=0, help="seed of the first replica")
    parser.add_argument("--batches", type=int, default=20, help="batch count for standard errors")
    parser.add_argument("--replicas", type=int, default=1, help="independent replicas, seeds seed..seed+R-1")
    parser.add_argument("--profile-out", default=None, help="profile CSV path (default beside --out)")
    parser.set_defaults(func=run)


def _profile_path(args: argparse.Namespace) -> str | None:
    if args.profile_out:
        return args.profile_out
    if args.out == STDOUT:
        return None
    path = Path(args.out)
    return str(path.with_name(f"{path.stem}_profile.csv"))


def run(args: argparse.Namespace) -> int:
    emit = Emitter("simulate", args)
    config = SimConfig(
        asep=asep_from_args(args),
        n_sites=args.n,
        total_time=args.time,
        burn_in_time=args.burnin,
        seed=args.seed,
        batch_count=args.batches,
    )
    seeds = [args.seed + r for r in range(args.replicas)]
    result = ReplicaPool().run_merged(config, seeds)
    emit.json(result)
    profile_path = _profile_path(args)
    if profile_path is not None:
        rows = [(j + 1, m, se) for j, (m, se) in enumerate(zip(result.occupancies, result.occupancy_se))]
        emit.csv("sim_profile.csv", rows, profile_path)
    emit.finish(seeds)
    return 0
