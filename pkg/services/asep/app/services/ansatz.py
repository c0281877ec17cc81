"""
Matrix product ansatz built from Askey-Wilson recurrences.

The martingale polynomials r_n(x; t) of the process Z satisfy
x <r| = <r| (t x + y) with tridiagonal x, y. The bands are obtained by
evaluating the Askey-Wilson recurrence coefficients at t = 1 and t = 2,
solving the linear relation entrywise, and certifying it at t = 3. Then

    E = I/(1-q) + y/sqrt(1-q),   D = I/(1-q) + x/sqrt(1-q),

with <W| = [1, 0, ...] and |V> = [1, 0, ...]^T, realize DE - qED = D + E and
the boundary relations. Orientation: column n of t x + y holds the
coefficients of x r_n, so the sub-diagonal carries the A-bar coefficients and
the super-diagonal the C-bar coefficients.
"""
import logging
import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import logsumexp

from ..config import get_settings
from ..errors import (
    DegenerateDenominator,
    FanRegionViolation,
    IndexOutOfRange,
    LengthMismatch,
    LinearityViolation,
    ParameterOutOfRange,
    QuadratureFailure,
    SizeLimitExceeded,
)
from ..models import AsepParams, AwParams, FrozenModel
from .params import derive_aw
from .quadrature import integrate_theta

logger = logging.getLogger(__name__)

Bands = tuple[np.ndarray, np.ndarray, np.ndarray]  # (sub, diag, super)


# ============================================================================
# Askey-Wilson recurrence
# ============================================================================

def _nonzero(value: complex, factor: str, n: int) -> None:
    if abs(value) <= 1e-15:
        raise DegenerateDenominator(factor, n)


def aw_recurrence_coeffs(n: int, a, b, c, d, q: float) -> tuple[float, float, float]:
    """
    (A-bar_n, B_n, C-bar_n) of 2x w_n = A-bar_n w_{n+1} + B_n w_n + C-bar_n w_{n-1}.

    B_n is evaluated in grouped form: the a + 1/a term is combined with the
    A-type fraction so that a = 0 is a regular point.
    """
    a, b, c, d = (complex(p) for p in (a, b, c, d))
    P = a * b * c * d
    e1 = b + c + d
    e2 = b * c + b * d + c * d
    e3 = b * c * d
    if n == 0:
        den = 1 - P
        _nonzero(den, "1-abcd", 0)
        abar = (1 - a * b) / den
        bn = a + (e1 - e3 - a * e2 + a * a * e3) / den
        cbar = 0.0
    else:
        s = q**n
        v = q ** (n - 1)
        f_prev = 1 - P * v * v
        f_mid = 1 - P * v * s
        f_next = 1 - P * s * s
        _nonzero(f_prev, "1-abcd*q^(2n-2)", n)
        _nonzero(f_mid, "1-abcd*q^(2n-1)", n)
        _nonzero(f_next, "1-abcd*q^(2n)", n)
        abar = (1 - P * v) * (1 - a * b * s) / (f_mid * f_next)
        grouped = (
            -e3 * (s * v + s * s) + e3 * v + s * e1
            + a * (e3 * e3 * s**3 * v - s * e1 * e3 * v - s * s * e2)
            + a * a * (s * s * e2 * e3 * v + s**3 * e3)
            - a**3 * s**3 * e3 * e3 * v
        ) / (f_mid * f_next)
        c_type = a * (1 - s) * (1 - b * c * v) * (1 - b * d * v) * (1 - c * d * v) / (f_prev * f_mid)
        bn = a + grouped - c_type
        cbar = (
            (1 - s) * (1 - a * c * v) * (1 - a * d * v) * (1 - b * c * v) * (1 - b * d * v)
            * (1 - c * d * v) / (f_prev * f_mid)
        )
    return complex(abar).real, complex(bn).real, complex(cbar).real


# ============================================================================
# Jacobi pair and matrices
# ============================================================================

class TridiagonalPair(BaseModel):
    """Bands of x and y; sub[n] is entry (n+1, n), sup[n] is entry (n, n+1)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int
    q: float
    x_sub: np.ndarray
    x_diag: np.ndarray
    x_super: np.ndarray
    y_sub: np.ndarray
    y_diag: np.ndarray
    y_super: np.ndarray

    def jacobi_bands(self, t: float) -> Bands:
        return (
            t * self.x_sub + self.y_sub,
            t * self.x_diag + self.y_diag,
            t * self.x_super + self.y_super,
        )

    def x_matrix(self) -> np.ndarray:
        return _dense((self.x_sub, self.x_diag, self.x_super))

    def y_matrix(self) -> np.ndarray:
        return _dense((self.y_sub, self.y_diag, self.y_super))

    def factor_bands(self, t: float) -> Bands:
        """Bands of E + t D."""
        sq = math.sqrt(1.0 - self.q)
        sub, diag, sup = self.jacobi_bands(t)
        return sub / sq, (1.0 + t) / (1.0 - self.q) + diag / sq, sup / sq

    def ansatz(self) -> "MatrixAnsatz":
        sq = math.sqrt(1.0 - self.q)
        eye = np.eye(self.dim) / (1.0 - self.q)
        W = np.zeros(self.dim)
        W[0] = 1.0
        return MatrixAnsatz(
            E=eye + self.y_matrix() / sq,
            D=eye + self.x_matrix() / sq,
            W=W,
            V=W.copy(),
        )


class MatrixAnsatz(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    E: np.ndarray
    D: np.ndarray
    W: np.ndarray
    V: np.ndarray


def _dense(bands: Bands) -> np.ndarray:
    sub, diag, sup = bands
    return np.diag(diag) + np.diag(sub, -1) + np.diag(sup, 1)


def _raw_bands(aw: AwParams, t: float, M: int) -> Bands:
    rt = math.sqrt(t)
    sq = math.sqrt(1.0 - aw.q)
    a, b, c, d = aw.A * rt, aw.B * rt, aw.C / rt, aw.D / rt
    sub = np.zeros(M - 1)
    diag = np.zeros(M)
    sup = np.zeros(M - 1)
    for n in range(M):
        abar, bn, cbar = aw_recurrence_coeffs(n, a, b, c, d, aw.q)
        diag[n] = rt * bn / sq
        if n + 1 < M:
            sub[n] = abar / sq
        if n >= 1:
            sup[n - 1] = t * cbar / sq
    return sub, diag, sup


def jacobi_pair(aw: AwParams, M: int) -> TridiagonalPair:
    """Tridiagonal x, y of size M with x <r| = <r| (t x + y)."""
    if aw.A * aw.C >= 1.0:
        raise FanRegionViolation(aw.A, aw.C)
    if M < 2:
        raise SizeLimitExceeded("truncation size must be at least 2", M=M)
    one = _raw_bands(aw, 1.0, M)
    two = _raw_bands(aw, 2.0, M)
    x = [b2 - b1 for b1, b2 in zip(one, two)]
    y = [2.0 * b1 - b2 for b1, b2 in zip(one, two)]
    three = _raw_bands(aw, 3.0, M)
    for name, b3, bx, by in zip(("sub", "diag", "super"), three, x, y):
        residual = np.abs(b3 - (3.0 * bx + by))
        if residual.size and np.max(residual / np.maximum(1.0, np.abs(b3))) > 1e-10:
            raise LinearityViolation(f"{name} band is not linear in t", band=name)
    return TridiagonalPair(
        dim=M, q=aw.q,
        x_sub=x[0], x_diag=x[1], x_super=x[2],
        y_sub=y[0], y_diag=y[1], y_super=y[2],
    )


def recurrence_polynomials(pair: TridiagonalPair, t: float, n_max: int, z: np.ndarray) -> np.ndarray:
    """Values r_0..r_{n_max} of the martingale polynomials at points z (rows by degree)."""
    if n_max + 1 > pair.dim:
        raise SizeLimitExceeded("degree exceeds truncation", n_max=n_max, dim=pair.dim)
    sub, diag, sup = pair.jacobi_bands(t)
    z = np.asarray(z, dtype=float)
    out = np.zeros((n_max + 1,) + z.shape)
    out[0] = 1.0
    for n in range(n_max):
        nxt = (z - diag[n]) * out[n]
        if n >= 1:
            nxt = nxt - sup[n - 1] * out[n - 1]
        out[n + 1] = nxt / sub[n]
    return out


# ============================================================================
# Banded products
# ============================================================================

def _row_times(v: np.ndarray, bands: Bands) -> np.ndarray:
    """v @ M for tridiagonal M; v may carry extra trailing columns."""
    sub, diag, sup = bands
    shape = (-1,) + (1,) * (v.ndim - 1)
    out = v * diag.reshape(shape)
    out[1:] += v[:-1] * sup.reshape(shape)
    out[:-1] += v[1:] * sub.reshape(shape)
    return out


def _col_times(v: np.ndarray, bands: Bands) -> np.ndarray:
    """M @ v for tridiagonal M."""
    sub, diag, sup = bands
    out = v * diag
    out[:-1] += sup * v[1:]
    out[1:] += sub * v[:-1]
    return out


def _log_weight(pair: TridiagonalPair, times: Sequence[float]) -> tuple[float, float]:
    """(sign, log|<W| prod_j (E + t_j D) |V>|) with per-step rescaling."""
    v = np.zeros(pair.dim)
    v[0] = 1.0
    log_scale = 0.0
    for t in times:
        v = _row_times(v, pair.factor_bands(t))
        m = float(np.max(np.abs(v)))
        v /= m
        log_scale += math.log(m)
    if v[0] == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, v[0]), log_scale + math.log(abs(v[0]))


def _prepare(asep: AsepParams, N: int, M: int | None = None) -> TridiagonalPair:
    limit = get_settings().max_ansatz_sites
    if N > limit:
        raise SizeLimitExceeded(f"N={N} exceeds the ansatz limit {limit}", N=N, limit=limit)
    return jacobi_pair(derive_aw(asep), M or N + 2)


def weight_ratio(pair: TridiagonalPair, numerator: Sequence[float], denominator: Sequence[float]) -> float:
    """<W|prod(E + s_j D)|V> / <W|prod(E + u_j D)|V>."""
    sign_n, log_n = _log_weight(pair, numerator)
    sign_d, log_d = _log_weight(pair, denominator)
    if sign_n == 0.0:
        return 0.0
    return sign_n * sign_d * math.exp(log_n - log_d)


# ============================================================================
# Observables
# ============================================================================

def joint_gf_exact(asep: AsepParams, t: Sequence[float], M: int | None = None) -> float:
    """Stationary E[prod_j t_j^{tau_j}] from the matrix product."""
    N = len(t)
    if N == 0:
        raise LengthMismatch("at least one site is required")
    pair = _prepare(asep, N, M)
    return weight_ratio(pair, list(t), [1.0] * N)


def log_partition(asep: AsepParams, N: int, M: int | None = None) -> float:
    if N == 0:
        return 0.0
    pair = _prepare(asep, N, M)
    sign, value = _log_weight(pair, [1.0] * N)
    return value


def partition(asep: AsepParams, N: int, M: int | None = None) -> float:
    """K_N = <W|(E+D)^N|V> with <W|V> = 1."""
    return math.exp(log_partition(asep, N, M))


class CountPolynomial(BaseModel):
    """Coefficients of <W|(E + tD)^N|V> in t, stored as scaled * exp(log_scale)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    N: int
    scaled: np.ndarray
    log_scale: float

    @property
    def coefficients(self) -> np.ndarray:
        return self.scaled * math.exp(self.log_scale)

    @property
    def probabilities(self) -> np.ndarray:
        return self.scaled / np.sum(self.scaled)

    @property
    def log_partition(self) -> float:
        return self.log_scale + math.log(float(np.sum(self.scaled)))

    def log_eval(self, t: float) -> float:
        """log of the polynomial at t > 0."""
        k = np.arange(self.N + 1)
        return self.log_scale + float(logsumexp(k * math.log(t), b=self.scaled))


def count_gf_poly(asep: AsepParams, N: int) -> CountPolynomial:
    """Banded products with polynomial entries: row j, column k holds the t^k coefficient."""
    pair = _prepare(asep, N)
    sq = math.sqrt(1.0 - asep.q)
    e_bands = (pair.y_sub / sq, 1.0 / (1.0 - asep.q) + pair.y_diag / sq, pair.y_super / sq)
    d_bands = (pair.x_sub / sq, 1.0 / (1.0 - asep.q) + pair.x_diag / sq, pair.x_super / sq)
    poly = np.zeros((pair.dim, N + 1))
    poly[0, 0] = 1.0
    log_scale = 0.0
    for _ in range(N):
        nxt = _row_times(poly, e_bands)
        nxt[:, 1:] += _row_times(poly, d_bands)[:, :-1]
        m = float(np.max(np.abs(nxt)))
        poly = nxt / m
        log_scale += math.log(m)
    return CountPolynomial(N=N, scaled=clean_coefficients(poly[0]), log_scale=log_scale)


def clean_coefficients(coeffs: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """Zero rounding-level negative coefficients; larger ones mean the product lost accuracy."""
    coeffs = np.array(coeffs, dtype=float)
    negative = coeffs < 0
    if np.any(negative):
        worst = float(np.max(-coeffs[negative]))
        bound = rel_tol * float(np.max(coeffs))
        if worst > bound:
            raise QuadratureFailure(
                f"count polynomial has a negative coefficient {-worst:.3g} beyond {bound:.3g}",
                worst=worst,
                bound=bound,
            )
        logger.debug("zeroing %d rounding-level negative coefficients", int(np.sum(negative)))
        coeffs[negative] = 0.0
    return coeffs


def profile_exact(asep: AsepParams, N: int, M: int | None = None) -> np.ndarray:
    """<tau_j> = <W|(E+D)^{j-1} D (E+D)^{N-j}|V> / K_N for j = 1..N."""
    pair = _prepare(asep, N, M)
    g = pair.factor_bands(1.0)
    sq = math.sqrt(1.0 - asep.q)
    d_bands = (pair.x_sub / sq, 1.0 / (1.0 - asep.q) + pair.x_diag / sq, pair.x_super / sq)

    def powers(step) -> tuple[list[np.ndarray], list[float]]:
        v = np.zeros(pair.dim)
        v[0] = 1.0
        vecs, logs = [v], [0.0]
        for _ in range(N):
            w = step(vecs[-1], g)
            m = float(np.max(np.abs(w)))
            vecs.append(w / m)
            logs.append(logs[-1] + math.log(m))
        return vecs, logs

    left, left_log = powers(_row_times)
    right, right_log = powers(_col_times)
    log_k = left_log[N] + math.log(left[N][0])
    profile = np.empty(N)
    for j in range(1, N + 1):
        inner = float(left[j - 1] @ _col_times(right[N - j], d_bands))
        profile[j - 1] = inner * math.exp(left_log[j - 1] + right_log[N - j] - log_k)
    return profile


def tau_last(asep: AsepParams, N: int) -> float:
    """delta/(beta+delta) + K_{N-1} / ((beta+delta) K_N)."""
    bd = asep.beta + asep.delta
    ratio = math.exp(log_partition(asep, N - 1) - log_partition(asep, N))
    return asep.delta / bd + ratio / bd


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def catalan_diff(N: int, j: int) -> Fraction:
    """Cat(j) Cat(N-j) / Cat(N+1): the step <tau_j> - <tau_{j+1}> for the q=0, alpha=beta=1 chain."""
    if not 1 <= j <= N - 1:
        raise IndexOutOfRange(f"j={j} outside 1..{N - 1}", N=N, j=j)
    return Fraction(catalan(j) * catalan(N - j), catalan(N + 1))


# ============================================================================
# q = 0 integral formulas
# ============================================================================

class SchutzFactors(FrozenModel):
    """
    Factorized profile step for q = 0, gamma = delta = 0.

    f_left integrates (2+z)^(j-1) against the C-kernel (depends on alpha only),
    f_right integrates (2+z)^(N-j-1) against the A-kernel (beta only).
    """

    f_left: float
    f_right: float
    k_hat: float
    difference: float


def _kernel_integral(power: int, kernels: Sequence[float]) -> float:
    """int_{-2}^{2} (2+z)^power sqrt(4-z^2) / prod_p (1 + p^2 - p z) dz."""

    def integrand(theta: np.ndarray) -> np.ndarray:
        z = 2.0 * np.cos(theta)
        den = np.ones_like(z)
        for p in kernels:
            den = den * (1.0 + p * p - p * z)
        return (2.0 + z) ** power * 4.0 * np.sin(theta) ** 2 / den

    value, _ = integrate_theta(integrand)
    return value


def _check_schutz_range(alpha: float, beta: float) -> tuple[float, float]:
    if alpha <= 0.5 or beta <= 0.5:
        raise ParameterOutOfRange("integral form needs alpha, beta > 1/2", alpha=alpha, beta=beta)
    return (1.0 - beta) / beta, (1.0 - alpha) / alpha


def schutz_factors(alpha: float, beta: float, N: int, j: int) -> SchutzFactors:
    A, C = _check_schutz_range(alpha, beta)
    if not 1 <= j <= N - 1:
        raise IndexOutOfRange(f"j={j} outside 1..{N - 1}", N=N, j=j)
    f_left = _kernel_integral(j - 1, [C])
    f_right = _kernel_integral(N - j - 1, [A])
    k_hat = _kernel_integral(N, [A, C])
    prefactor = (alpha + beta - 1.0) / (alpha * beta) / (2.0 * math.pi * (1.0 - A * C))
    return SchutzFactors(
        f_left=f_left,
        f_right=f_right,
        k_hat=k_hat,
        difference=prefactor * f_left * f_right / k_hat,
    )


def k_integral(alpha: float, beta: float, N: int) -> float:
    """K_N for q = gamma = delta = 0 and alpha, beta > 1/2."""
    A, C = _check_schutz_range(alpha, beta)
    return (alpha + beta - 1.0) / (2.0 * math.pi * alpha * beta) * _kernel_integral(N, [A, C])
