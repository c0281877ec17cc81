"""
Bi-Poisson harness for the totally asymmetric boundary case (gamma = delta = 0).

The process X_t is an affine image of Z_t:
    1 + t + sqrt(1-q) Z_t = (1-q) L_t(X_t),
so its marginals and transitions are pushed forward from the Askey-Wilson
laws. On top of those laws this module provides the orthogonal polynomials
Q_n, the martingale polynomials M_n, the operator H_t and the generator A_t
on polynomials, and the integral form of the profile differences.
"""
import logging
import math
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import model_validator

from ..errors import ParameterOutOfRange
from ..models import AsepParams, AwParams, FrozenModel
from .awdist import MixedMeasure, marginal_z, transition_z
from .params import derive_aw, x_map_constants
from .qcalc import q_number

logger = logging.getLogger(__name__)


class BiPoissonParams(FrozenModel):
    """Harness parameters eta, theta with the rates they come from."""

    alpha: float
    beta: float
    q: float
    eta: float
    theta: float

    @model_validator(mode="after")
    def _check_constraint(self) -> "BiPoissonParams":
        if 1.0 + self.eta * self.theta <= self.q:
            raise ValueError("1 + eta*theta must exceed q")
        return self

    def aw(self) -> AwParams:
        return derive_aw(AsepParams(alpha=self.alpha, beta=self.beta, q=self.q))

    def harness_constants(self) -> dict[str, float]:
        """Full quadratic-harness constants; tau = sigma = 0 and gamma = q here."""
        return {"eta": self.eta, "theta": self.theta, "tau": 0.0, "sigma": 0.0, "gamma": self.q}


class QPolynomial(FrozenModel):
    """Polynomial by ascending coefficients."""

    coefficients: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, y):
        value = np.zeros_like(np.asarray(y, dtype=float))
        for c in reversed(self.coefficients):
            value = value * y + c
        return value

    def to_numpy(self) -> Polynomial:
        return Polynomial(self.coefficients)

    @classmethod
    def from_numpy(cls, p: Polynomial) -> "QPolynomial":
        return cls(coefficients=tuple(float(c) for c in p.coef))


PolynomialLike = Union[QPolynomial, Polynomial, Sequence[float]]


def _as_numpy(p: PolynomialLike) -> Polynomial:
    if isinstance(p, QPolynomial):
        return p.to_numpy()
    if isinstance(p, Polynomial):
        return p
    return Polynomial(list(p))


def eta_theta(alpha: float, beta: float, q: float) -> BiPoissonParams:
    total = alpha + beta + q - 1.0
    if total <= 0.0:
        raise ParameterOutOfRange("requires alpha + beta > 1 - q", alpha=alpha, beta=beta, q=q)
    root = math.sqrt(total)
    return BiPoissonParams(
        alpha=alpha,
        beta=beta,
        q=q,
        eta=(beta + q - 1.0) * math.sqrt(alpha / beta) / root,
        theta=(alpha + q - 1.0) * math.sqrt(beta / alpha) / root,
    )


# ============================================================================
# Polynomial families
# ============================================================================

def _recurrence_coeffs(k: int, x: float, t: float, s: float, params: BiPoissonParams) -> tuple[float, float]:
    if k == 0:
        return x, 0.0
    q, eta, theta = params.q, params.eta, params.theta
    qk = q_number(k, q)
    lead = q ** (k - 1)
    a_k = q**k * x + qk * (t * eta + theta - q_number(2, q) * lead * s * eta)
    b_k = qk * (t - s * lead) * (1.0 + eta * x * lead + q_number(k - 1, q) * eta * (theta - s * eta * lead))
    return a_k, b_k


def q_poly(n: int, x: float, t: float, s: float, params: BiPoissonParams) -> QPolynomial:
    """Monic Q_n(y; x, t, s), orthogonal under P_{s,t}(x, dy)."""
    y = Polynomial([0.0, 1.0])
    prev, cur = Polynomial([0.0]), Polynomial([1.0])
    for k in range(n):
        a_k, b_k = _recurrence_coeffs(k, x, t, s, params)
        prev, cur = cur, (y - a_k) * cur - b_k * prev
    return QPolynomial.from_numpy(cur)


def m_poly(n: int, t: float, params: BiPoissonParams) -> QPolynomial:
    """Martingale polynomial M_n(x; t) = Q_n(x; 0, t, 0)."""
    return q_poly(n, 0.0, t, 0.0, params)


def m_poly_dt(n: int, t: float, params: BiPoissonParams) -> QPolynomial:
    """d/dt M_n(x; t), by differentiating the three-term recurrence."""
    q, eta, theta = params.q, params.eta, params.theta
    x = Polynomial([0.0, 1.0])
    zero = Polynomial([0.0])
    m_prev, m_cur = zero, Polynomial([1.0])
    d_prev, d_cur = zero, zero
    for k in range(n):
        qk = q_number(k, q)
        shift = (theta + t * eta) * qk
        jump = (1.0 + eta * theta * q_number(k - 1, q)) * qk if k > 0 else 0.0
        m_next = (x - shift) * m_cur - t * jump * m_prev
        d_next = -eta * qk * m_cur + (x - shift) * d_cur - jump * m_prev - t * jump * d_prev
        m_prev, m_cur = m_cur, m_next
        d_prev, d_cur = d_cur, d_next
    return QPolynomial.from_numpy(d_cur)


# ============================================================================
# X-process laws
# ============================================================================

def l_map(params: BiPoissonParams, t: float, x):
    """L_t(x) = sqrt(alpha+beta+q-1)/sqrt(alpha*beta) x + t/beta + 1/alpha."""
    slope = math.sqrt(params.alpha + params.beta + params.q - 1.0) / math.sqrt(params.alpha * params.beta)
    return slope * np.asarray(x) + t / params.beta + 1.0 / params.alpha


def _to_x(params: BiPoissonParams, measure: MixedMeasure, t: float) -> MixedMeasure:
    scale, slope, offset = x_map_constants(params.aw())
    return measure.scaled(1.0 / scale, -(slope * t + offset) / scale)


def x_marginal(params: BiPoissonParams, t: float) -> MixedMeasure:
    return _to_x(params, marginal_z(params.aw(), t), t)


def x_transition(params: BiPoissonParams, s: float, t: float, x: float) -> MixedMeasure:
    """P_{s,t}(x, dy) for 0 <= s < t."""
    aw = params.aw()
    scale, slope, offset = x_map_constants(aw)
    w = scale * x + slope * s + offset
    return _to_x(params, transition_z(aw, s, t, w), t)


def _harness_measure(params: BiPoissonParams, x: float, t: float) -> MixedMeasure:
    """nu_{x,t} = P_{q^2 t, t}(q(x - t eta) + theta, dy)."""
    q = params.q
    return x_transition(params, q * q * t, t, q * (x - t * params.eta) + params.theta)


# ============================================================================
# Operators on polynomials
# ============================================================================

def H_closed(n: int, x: float, t: float, params: BiPoissonParams) -> float:
    if n == 0:
        return 0.0
    q, eta, theta = params.q, params.eta, params.theta
    qn = q_number(n, q)
    return float(
        eta * qn * m_poly(n, t, params)(x)
        + (1.0 + eta * theta * q_number(n - 1, q)) * qn * m_poly(n - 1, t, params)(x)
    )


def _difference_quotient(p: Polynomial, x: float) -> Polynomial:
    """(p(y) - p(x)) / (y - x) as a polynomial in y."""
    c = p.coef
    out = np.zeros(max(len(c) - 1, 1))
    for i in range(len(c) - 1):
        out[i] = sum(c[k] * x ** (k - 1 - i) for k in range(i + 1, len(c)))
    return Polynomial(out)


def _difference_quotient_dx(p: Polynomial, x: float) -> Polynomial:
    """d/dx of the difference quotient, as a polynomial in y."""
    c = p.coef
    out = np.zeros(max(len(c) - 2, 1))
    for i in range(len(c) - 2):
        out[i] = sum(c[k] * (k - 1 - i) * x ** (k - 2 - i) for k in range(i + 2, len(c)))
    return Polynomial(out)


def H_integral(p: PolynomialLike, x: float, t: float, params: BiPoissonParams) -> float:
    """(1 + eta x) * integral of (p(y) - p(x)) / (y - x) against nu_{x,t}."""
    quotient = _difference_quotient(_as_numpy(p), x)
    nu = _harness_measure(params, x, t)
    return (1.0 + params.eta * x) * nu.expect_adaptive(quotient)


def generator_A(p: PolynomialLike, x: float, t: float, params: BiPoissonParams) -> float:
    """Infinitesimal generator of X at time t applied to p, evaluated at x."""
    derivative = _difference_quotient_dx(_as_numpy(p), x)
    nu = _harness_measure(params, x, t)
    return (1.0 + params.eta * x) * nu.expect_adaptive(derivative)


def conditional_expectation(p: PolynomialLike, params: BiPoissonParams, s: float, t: float, x: float) -> float:
    """E[p(X_t) | X_s = x]."""
    return x_transition(params, s, t, x).expect_adaptive(_as_numpy(p))


def martingale_transport_residual(n: int, params: BiPoissonParams, s: float, t: float, x: float) -> float:
    """|E[M_n(X_t; t) | X_s = x] - M_n(x; s)|."""
    moved = conditional_expectation(m_poly(n, t, params), params, s, t, x)
    return abs(moved - float(m_poly(n, s, params)(x)))


def variance_hook(params: BiPoissonParams, s: float, t: float, x: float) -> tuple[float, float]:
    """(integral of (y-x)^2 under P_{s,t}(x,dy), (t-s)(1+eta x))."""
    measured = x_transition(params, s, t, x).expect_adaptive(lambda y: (y - x) ** 2)
    return measured, (t - s) * (1.0 + params.eta * x)


# ============================================================================
# Profile integrals
# ============================================================================

def pi1_density(params: BiPoissonParams) -> MixedMeasure:
    """Law of X_1 at q = 0 for alpha, beta > 1/2 (absolutely continuous)."""
    if params.q != 0.0:
        raise ParameterOutOfRange("closed-form pi_1 needs q = 0", q=params.q)
    if params.alpha <= 0.5 or params.beta <= 0.5:
        raise ParameterOutOfRange("closed-form pi_1 needs alpha, beta > 1/2", alpha=params.alpha, beta=params.beta)
    eta, theta = params.eta, params.theta
    center = eta + theta
    half = 2.0 * math.sqrt(1.0 + eta * theta)

    def weight(phi: np.ndarray) -> np.ndarray:
        x = center + half * np.cos(phi)
        return half * half * np.sin(phi) ** 2 / (2.0 * math.pi * (1.0 + eta * x) * (1.0 + theta * x))

    return MixedMeasure.build(center, half, weight)


def tau_diff_integral(alpha: float, beta: float, q: float, N: int, j: int) -> float:
    """<tau_j> - <tau_{j+1}> on N sites from the harness integral."""
    if not 1 <= j <= N - 1:
        raise ParameterOutOfRange(f"j={j} outside 1..{N - 1}", N=N, j=j)
    params = eta_theta(alpha, beta, q)
    eta, theta = params.eta, params.theta
    pi1 = x_marginal(params, 1.0)

    def L(x):
        return l_map(params, 1.0, x)

    if q == 0.0:
        inner = pi1.expect_adaptive(lambda y: L(y) ** (N - j - 1) * (1.0 + theta * y))
        outer = pi1.expect_adaptive(lambda x: L(x) ** (j - 1) * (1.0 + eta * x))
        numerator = inner * outer
    else:
        xs, masses = pi1.points_and_masses()
        inner = np.array([
            x_transition(params, q * q, 1.0, theta + q * (x - eta)).expect_adaptive(
                lambda y: L(y) ** (N - j - 1)
            )
            for x in xs
        ])
        numerator = float(np.sum(masses * inner * L(xs) ** (j - 1) * (1.0 + eta * xs)))
    normalizer = pi1.expect_adaptive(lambda x: L(x) ** N)
    prefactor = (alpha + beta + q - 1.0) / (alpha * beta)
    return prefactor * numerator / normalizer
