"""
`params`: Askey-Wilson quadruple, boundary densities, phase and current.
"""
import argparse

from ..models import ParamsReport
from ..services.params import classify, derive_aw
from ..services.semiinf import current
from .args import asep_from_args
from .output import Emitter


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("params", parents=parents, help="derive A, B, C, D and the phase")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    emit = Emitter("params", args)
    aw = derive_aw(asep_from_args(args))
    info = classify(aw)
    emit.json(ParamsReport(
        A=aw.A, B=aw.B, C=aw.C, D=aw.D,
        rho0=info.rho0, rho1=info.rho1, phase=info.phase, J=current(aw),
    ))
    emit.finish()
    return 0
