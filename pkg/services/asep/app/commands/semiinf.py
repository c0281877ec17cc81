"""
`semiinf`: generating function of the leftmost K sites of the semi-infinite
lattice with weight u per particle.
"""
import argparse

from ..models import SemiinfReport
from ..services import semiinf
from ..services.params import derive_aw
from .args import asep_from_args, parse_times
from .output import Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("semiinf", parents=parents, help="semi-infinite lattice marginals")
    parser.add_argument("--u", type=float, default=1.0, help="fugacity u >= 1")
    parser.add_argument("--k", type=int, required=True, help="number of leftmost sites")
    parser.add_argument("--times", default=None, help="t1,...,tK in (0, u]; default j/K")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    emit = Emitter("semiinf", args)
    aw = derive_aw(asep_from_args(args))
    K = args.k
    if args.times is None:
        times = [min(args.u, 1.0) * (j + 1) / K for j in range(K)]
    else:
        times = parse_times(args.times)
    tilde = semiinf.tilde_params(aw, args.u)
    emit.json(SemiinfReport(
        u=args.u,
        K=K,
        A_tilde=tilde.A_tilde,
        B_tilde=tilde.B_tilde,
        deterministic=tilde.deterministic,
        zeta=semiinf.zeta(aw, args.u),
        times=times,
        gf=semiinf.mu_gf(aw, args.u, K, times, ordered=False),
        site_density=semiinf.site_density(aw, args.u),
    ))
    emit.finish()
    return 0
