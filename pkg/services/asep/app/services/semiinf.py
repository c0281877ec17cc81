"""
Limits of the finite lattice as N grows, seen from the left boundary.

For u >= 1 the leftmost K sites, with the remaining sites weighted by
u^(number of particles), converge to a law mu_{K,u} whose generating function
is a ratio of expectations of the process Z-tilde with parameters
(A-tilde, B-tilde, C, D). When u <= C^2 that process is the deterministic
path sqrt(1-q) Z_t = t/C + C and mu_{K,u} is a Bernoulli product.
"""
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DomainError, FanRegionViolation, LengthMismatch, NonMonotoneTimes, ParameterOutOfRange
from ..models import AsepParams, AwParams, FrozenModel
from .ansatz import jacobi_pair, weight_ratio
from .awdist import MixedMeasure, SupportEnvelope
from .params import derive_aw

logger = logging.getLogger(__name__)


class TildeParams(FrozenModel):
    """Parameters of the process behind mu_{K,u}."""

    u: float
    A_tilde: float
    B_tilde: float
    C_tilde: float
    D_tilde: float
    deterministic: bool
    # t-coefficient of the path ratio normalized at t = u; None off the Bernoulli regime.
    path_ratio_coefficient: Optional[float] = None

    def aw(self, q: float) -> AwParams:
        return AwParams(A=self.A_tilde, B=self.B_tilde, C=self.C_tilde, D=self.D_tilde, q=q)


def _check(aw: AwParams, u: float) -> None:
    if aw.A * aw.C >= 1.0:
        raise FanRegionViolation(aw.A, aw.C)
    if u < 1.0:
        raise ParameterOutOfRange(f"u must be at least 1, got {u}", u=u)


def tilde_params(aw: AwParams, u: float) -> TildeParams:
    _check(aw, u)
    C = aw.C
    if u <= C * C:
        return TildeParams(
            u=u, A_tilde=C / u, B_tilde=1.0 / C, C_tilde=C, D_tilde=aw.D,
            deterministic=True, path_ratio_coefficient=1.0 / (C + u),
        )
    if aw.A > 0 and u > 1.0 / (aw.A * aw.A):
        return TildeParams(
            u=u, A_tilde=aw.A, B_tilde=1.0 / (aw.A * u), C_tilde=C, D_tilde=aw.D, deterministic=False
        )
    root = 1.0 / math.sqrt(u)
    return TildeParams(u=u, A_tilde=root, B_tilde=root, C_tilde=C, D_tilde=aw.D, deterministic=False)


def zeta(aw: AwParams, u: float) -> float:
    _check(aw, u)
    A, C = aw.A, aw.C
    if u <= C * C:
        return (C + 1.0) * (C + u) / (C * u)
    if A > 0 and u > 1.0 / (A * A):
        return (A + 1.0) * (A * u + 1.0) / (A * u)
    return (1.0 + 1.0 / math.sqrt(u)) ** 2


def tilde_rates(aw: AwParams, u: float) -> tuple[float, float]:
    """
    Right-boundary rates (beta-tilde, delta-tilde) of a K-site chain whose
    quadruple is (A-tilde, B-tilde, C, D).

    beta-tilde = (1-q)/zeta and delta-tilde = -beta-tilde/u, so delta-tilde is
    negative and the chain is not a physical exclusion process. At u = 1 the
    pair is (J, -J).
    """
    beta_tilde = (1.0 - aw.q) / zeta(aw, u)
    return beta_tilde, -beta_tilde / u


def current(aw: AwParams) -> float:
    """J = (1-q) / (2 + U(1))."""
    if aw.A * aw.C >= 1.0:
        raise FanRegionViolation(aw.A, aw.C)
    return (1.0 - aw.q) / (2.0 + SupportEnvelope(aw=aw).upper(1.0))


# ============================================================================
# Generating functions
# ============================================================================

def _check_times(t: Sequence[float], K: int, upper: float, ordered: bool = True) -> list[float]:
    times = [float(x) for x in t]
    if len(times) != K:
        raise LengthMismatch(f"expected {K} times, got {len(times)}", K=K, length=len(times))
    if any(x <= 0.0 or x > upper for x in times):
        raise ParameterOutOfRange(f"times must lie in (0, {upper}]", upper=upper)
    if ordered and any(b < a for a, b in zip(times, times[1:])):
        raise NonMonotoneTimes("times must be nondecreasing", times=times)
    return times


def _ansatz_gf(aw: AwParams, times: list[float]) -> float:
    pair = jacobi_pair(aw, len(times) + 2)
    return weight_ratio(pair, times, [1.0] * len(times))


def mu_gf(aw: AwParams, u: float, K: int, t: Sequence[float], ordered: bool = True) -> float:
    """
    Generating function of mu_{K,u} at times in (0, u].

    The times must be nondecreasing unless ordered=False; the matrix product
    is defined for any order.
    """
    tilde = tilde_params(aw, u)
    times = _check_times(t, K, u, ordered)
    if tilde.deterministic:
        C = aw.C
        return float(np.prod([(C + x) / (C + 1.0) for x in times]))
    return _ansatz_gf(tilde.aw(aw.q), times)


def mu_gf_limit(aw: AwParams, K: int, t: Sequence[float]) -> float:
    """u -> infinity limit: the same ratio with parameters (A, 0, C, D)."""
    if aw.A * aw.C >= 1.0:
        raise FanRegionViolation(aw.A, aw.C)
    times = _check_times(t, K, math.inf)
    return _ansatz_gf(AwParams(A=aw.A, B=0.0, C=aw.C, D=aw.D, q=aw.q), times)


def site_density(aw: AwParams, u: float) -> Optional[float]:
    """Bernoulli density of mu_{K,u} when u <= C^2, otherwise None."""
    return 1.0 / (1.0 + aw.C) if tilde_params(aw, u).deterministic else None


def tilde_variance(aw: AwParams, u: float, t: float) -> float:
    """Variance of sqrt(1-q) Z-tilde_t from the first Jacobi entries."""
    tilde = tilde_params(aw, u)
    if tilde.deterministic:
        return 0.0
    pair = jacobi_pair(tilde.aw(aw.q), 2)
    sub, _, sup = pair.jacobi_bands(t)
    return (1.0 - aw.q) * float(sub[0] * sup[0])


def consistency_residual(aw: AwParams, u: float, K: int, t: Sequence[float]) -> float:
    """|gf_{K+1}(t, 1) - gf_K(t)|; zero when the family mu_{K,u} is consistent."""
    return abs(mu_gf(aw, u, K + 1, list(t) + [1.0]) - mu_gf(aw, u, K, t))


def finite_marginal_gf(asep: AsepParams, N: int, t: Sequence[float], u: float = 1.0) -> float:
    """
    <prod_{j<=K} t_j^tau_j u^(tau_{K+1}+...+tau_N)>_N / <u^(tau_{K+1}+...+tau_N)>_N
    on the finite lattice.
    """
    K = len(t)
    if K > N:
        raise LengthMismatch(f"K={K} exceeds N={N}", K=K, N=N)
    pair = jacobi_pair(derive_aw(asep), N + 2)
    tail = [u] * (N - K)
    return weight_ratio(pair, list(t) + tail, [1.0] * K + tail)


# ============================================================================
# u -> infinity
# ============================================================================

def effective_beta(asep: AsepParams) -> AsepParams:
    """Rates of the K-site chain whose stationary law is mu_{K,infinity}."""
    derive_aw(asep)
    b, d, q = asep.beta, asep.delta, asep.q
    root = math.sqrt(4.0 * b * d + (b - d + q - 1.0) ** 2)
    beta_tilde = 2.0 * b * (1.0 - q) / (1.0 - q + b + d + root)
    return AsepParams(alpha=asep.alpha, beta=beta_tilde, gamma=asep.gamma, delta=0.0, q=q)


def ratio_limit_check(Z: MixedMeasure, p: Callable[[np.ndarray], np.ndarray], n: int) -> float:
    """E[p(Z) Z^n] / E[Z^n] for a bounded nonnegative Z; tends to p(max Z)."""
    lo, hi = Z.support()
    if lo < -1e-12:
        raise DomainError(f"Z must be nonnegative, support starts at {lo}", lo=lo)
    if hi <= 0.0:
        raise DomainError("Z must not vanish identically")

    def power(z: np.ndarray) -> np.ndarray:
        return np.clip(z / hi, 0.0, None) ** n

    return Z.expect_adaptive(lambda z: p(z) * power(z)) / Z.expect_adaptive(power)
