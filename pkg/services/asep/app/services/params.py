"""
Rate map between the physical exclusion process and Askey-Wilson parameters.

derive_aw maps (alpha, beta, gamma, delta, q) to (A, B, C, D) through kappa,
invert_aw goes back, and phase_info classifies the stationary phase from the
boundary densities rho0 = 1/(1+C) and rho1 = A/(1+A).
"""
import logging
import math
import sys
from typing import Literal

from ..errors import DomainError, FanRegionViolation, InvalidAwParams
from ..models import AsepParams, AwParams, PhaseInfo

logger = logging.getLogger(__name__)


def kappa(u: float, v: float, q: float, sign: Literal["plus", "minus"]) -> float:
    """
    Root of u*k**2 - (1-q-u+v)*k - v = 0.

    For v >= 0, plus is the root >= 0 and minus the root in (-1, 0]. A negative
    v (the rates standing in for the semi-infinite lattice) has two positive
    roots; plus is the larger one.
    """
    b = 1.0 - q - u + v
    # Same discriminant as b**2 + 4uv; free of cancellation when v >= 0.
    disc2 = (1.0 - q - u - v) ** 2 + 4.0 * (1.0 - q) * v
    if v < 0:
        scale = (1.0 - q - u - v) ** 2 + 4.0 * (1.0 - q) * abs(v)
        if disc2 < -1e-12 * scale:
            raise DomainError(f"kappa has complex roots at u={u}, v={v}", u=u, v=v, q=q)
        # Within rounding of a double root, which is then b / (2u).
        if disc2 <= 64.0 * sys.float_info.epsilon * scale:
            disc2 = 0.0
    disc = math.sqrt(disc2)
    # Each root is formed on the branch where no cancellation occurs.
    if sign == "plus":
        if b >= 0:
            return (b + disc) / (2.0 * u)
        return 2.0 * v / (disc - b)
    if b <= 0:
        return (b - disc) / (2.0 * u)
    if b + disc == 0.0:
        return 0.0
    return -2.0 * v / (b + disc)


def derive_aw(asep: AsepParams) -> AwParams:
    """Askey-Wilson quadruple of an exclusion process; rejects AC >= 1."""
    A = kappa(asep.beta, asep.delta, asep.q, "plus")
    B = kappa(asep.beta, asep.delta, asep.q, "minus")
    C = kappa(asep.alpha, asep.gamma, asep.q, "plus")
    D = kappa(asep.alpha, asep.gamma, asep.q, "minus")
    if A * C >= 1.0:
        raise FanRegionViolation(A, C)
    return AwParams(A=A, B=B, C=C, D=D, q=asep.q)


def invert_aw(aw: AwParams) -> AsepParams:
    """Rates whose stationary measure is described by the given quadruple."""
    A, B, C, D, q = aw.A, aw.B, aw.C, aw.D, aw.q
    left = (1.0 + C) * (1.0 + D)
    right = (1.0 + A) * (1.0 + B)
    if left <= 0 or right <= 0:
        raise InvalidAwParams("(1+A)(1+B) and (1+C)(1+D) must be positive", A=A, B=B, C=C, D=D)
    if A * B > 0 or C * D > 0:
        raise InvalidAwParams("AB and CD must be nonpositive", A=A, B=B, C=C, D=D)
    return AsepParams(
        alpha=(1.0 - q) / left,
        beta=(1.0 - q) / right,
        gamma=-(1.0 - q) * C * D / left + 0.0,
        delta=-(1.0 - q) * A * B / right + 0.0,
        q=q,
    )


def classify(aw: AwParams) -> PhaseInfo:
    """Phase of an already validated quadruple."""
    if aw.A * aw.C >= 1.0:
        raise FanRegionViolation(aw.A, aw.C)
    rho0 = 1.0 / (1.0 + aw.C)
    rho1 = aw.A / (1.0 + aw.A)
    # A = 1 or C = 1 exactly counts as maximal current.
    if aw.C > 1.0:
        return PhaseInfo(rho0=rho0, rho1=rho1, phase="LowDensity", bulk_density=rho0)
    if aw.A > 1.0:
        return PhaseInfo(rho0=rho0, rho1=rho1, phase="HighDensity", bulk_density=rho1)
    return PhaseInfo(rho0=rho0, rho1=rho1, phase="MaximalCurrent", bulk_density=0.5)


def phase_info(asep: AsepParams) -> PhaseInfo:
    return classify(derive_aw(asep))


def boundary_balance(asep: AsepParams) -> tuple[float, float]:
    """Residuals of (1+C+D)alpha = 1-q+gamma and (1+A+B)beta = 1-q+delta."""
    aw = derive_aw(asep)
    left = (1.0 + aw.C + aw.D) * asep.alpha - (1.0 - asep.q + asep.gamma)
    right = (1.0 + aw.A + aw.B) * asep.beta - (1.0 - asep.q + asep.delta)
    return left, right


def x_map_constants(aw: AwParams) -> tuple[float, float, float]:
    """
    Constants of the affine map sqrt(1-q) Z_t = scale * X_t + slope * t + offset.

    Only defined when AB = CD = 0 (gamma = delta = 0), where the time change
    between the harness X and the process Z is the identity.
    """
    if aw.A * aw.B != 0.0 or aw.C * aw.D != 0.0:
        raise InvalidAwParams("affine X map requires AB = CD = 0", A=aw.A, B=aw.B, C=aw.C, D=aw.D)
    pairs = (1 - aw.A * aw.C) * (1 - aw.A * aw.D) * (1 - aw.B * aw.C) * (1 - aw.B * aw.D)
    scale = math.sqrt((1.0 - aw.q) * pairs)
    return scale, aw.A + aw.B, aw.C + aw.D
