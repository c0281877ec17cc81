"""
Large deviations of the particle density.

Lambda(lambda) = lim (1/N) log E[exp(lambda * sum tau_j)] equals
L(lambda) - L(0) with L piecewise in e^lambda against C^2 and 1/A^2; the rate
function I is its Legendre transform, given in closed form by relative
entropies of Bernoulli laws.
"""
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp, xlogy

from ..errors import DomainError, FanRegionViolation
from ..models import AsepParams, AwParams, FrozenModel, Phase
from .ansatz import CountPolynomial, count_gf_poly
from .params import classify

logger = logging.getLogger(__name__)

LEGENDRE_BOUND = 100.0


class RateFunctionSample(FrozenModel):
    """Rate function on a grid together with its phase and minimizer."""

    grid: list[float]
    values: list[float]
    phase: Phase
    zero_location: float


def bernoulli_entropy(x, p: float):
    """h(x|p) = x log(x/p) + (1-x) log((1-x)/(1-p)), with 0 log 0 = 0."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}", p=p)
    xs = np.asarray(x, dtype=float)
    if np.any((xs < 0.0) | (xs > 1.0)):
        raise DomainError("x must lie in [0, 1]")
    value = xlogy(xs, xs) - xlogy(xs, p) + xlogy(1.0 - xs, 1.0 - xs) - xlogy(1.0 - xs, 1.0 - p)
    return float(value) if np.ndim(value) == 0 else value


def _check(aw: AwParams) -> None:
    if aw.A * aw.C >= 1.0:
        raise FanRegionViolation(aw.A, aw.C)


def _branch(lam: float, aw: AwParams) -> str:
    if aw.C > 0 and lam < 2.0 * math.log(aw.C):
        return "low"
    if aw.A > 0 and lam > -2.0 * math.log(aw.A):
        return "high"
    return "middle"


def _script_L_branch(lam: float, aw: AwParams, branch: str) -> float:
    if branch == "low":
        return float(np.logaddexp(math.log(aw.C), lam)) + math.log((1.0 + aw.C) / aw.C)
    if branch == "high":
        return float(np.logaddexp(0.0, math.log(aw.A) + lam)) + math.log((1.0 + aw.A) / aw.A)
    return 2.0 * float(np.logaddexp(0.0, lam / 2.0))


def script_L(lam: float, aw: AwParams) -> float:
    _check(aw)
    value = _script_L_branch(lam, aw, _branch(lam, aw))
    # Exactly on a branch boundary both adjacent formulas must agree.
    for edge, side in ((aw.C, "low"), (1.0 / aw.A if aw.A > 0 else 0.0, "high")):
        if edge > 0 and lam == 2.0 * math.log(edge):
            other = _script_L_branch(lam, aw, side)
            if abs(other - value) > 1e-12 * max(1.0, abs(value)):
                raise DomainError("script_L branches disagree at boundary", lam=lam)
    return value


def script_L_derivative(lam: float, aw: AwParams) -> float:
    _check(aw)
    branch = _branch(lam, aw)
    if branch == "low":
        return 1.0 / (1.0 + aw.C * math.exp(-lam))
    if branch == "high":
        return 1.0 / (1.0 + math.exp(-lam) / aw.A)
    return 1.0 / (1.0 + math.exp(-lam / 2.0))


def L0(aw: AwParams) -> float:
    return script_L(0.0, aw)


def Lambda(lam: float, aw: AwParams) -> float:
    return script_L(lam, aw) - L0(aw)


def rate_I(x: float, aw: AwParams) -> float:
    """Closed-form rate function; +inf outside [0, 1]."""
    info = classify(aw)
    if x < 0.0 or x > 1.0:
        return math.inf
    rho0, rho1 = info.rho0, info.rho1
    l0 = L0(aw)
    if x < 1.0 - rho0:
        return bernoulli_entropy(x, rho0) + l0 + math.log(rho0 * (1.0 - rho0))
    if x > 1.0 - rho1:
        return bernoulli_entropy(x, rho1) + l0 + math.log(rho1 * (1.0 - rho1))
    return 2.0 * bernoulli_entropy(x, 0.5) + l0 - math.log(4.0)


def rate_table(aw: AwParams, grid: Sequence[float]) -> RateFunctionSample:
    info = classify(aw)
    return RateFunctionSample(
        grid=[float(x) for x in grid],
        values=[rate_I(float(x), aw) for x in grid],
        phase=info.phase,
        zero_location=info.bulk_density,
    )


def legendre_rate(x: float, aw: AwParams) -> float:
    """sup over lambda of (lambda x - Lambda(lambda)), by bounded scalar minimization."""
    _check(aw)
    if x < 0.0 or x > 1.0:
        return math.inf
    result = minimize_scalar(
        lambda lam: Lambda(lam, aw) - lam * x,
        bounds=(-LEGENDRE_BOUND, LEGENDRE_BOUND),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return -float(result.fun)


def window_rate(aw: AwParams, a: float, b: float) -> float:
    """inf of I over (a, b); I is convex with its zero at the bulk density."""
    zero = classify(aw).bulk_density
    if a < zero < b:
        return 0.0
    return min(rate_I(a, aw), rate_I(b, aw))


# ============================================================================
# Finite-N counterparts
# ============================================================================

def empirical_Lambda(
    asep: AsepParams, N: int, lam: float, poly: Optional[CountPolynomial] = None
) -> float:
    """(1/N) log E[exp(lambda * sum tau_j)] from the exact count polynomial."""
    if lam == 0.0:
        return 0.0
    if poly is None:
        poly = count_gf_poly(asep, N)
    return (poly.log_eval(math.exp(lam)) - poly.log_partition) / N


def ldp_window(
    asep: AsepParams, N: int, a: float, b: float, poly: Optional[CountPolynomial] = None
) -> float:
    """(1/N) log P(a < sum tau_j / N < b)."""
    if poly is None:
        poly = count_gf_poly(asep, N)
    k = np.arange(N + 1)
    inside = (k > a * N) & (k < b * N) & (poly.scaled > 0)
    if not np.any(inside):
        return -math.inf
    log_mass = float(logsumexp(np.log(poly.scaled[inside]))) - math.log(float(np.sum(poly.scaled)))
    return log_mass / N


def semiinf_Lambda(aw: AwParams, u: float, lam: float) -> float:
    """Cumulant limit of the weighted semi-infinite measure; only defined for lambda <= log u."""
    if lam > math.log(u):
        raise DomainError(f"lambda={lam} exceeds log u={math.log(u):.6g}", lam=lam, u=u)
    return Lambda(lam, aw)
