"""
Askey-Wilson laws and the process Z_t.

The law nu(dy; a, b, c, d, q) is a density on [-1, 1] plus finitely many atoms
generated by the real parameters of modulus above one. Marginals of
W_t = sqrt(1-q) Z_t are nu(A sqrt(t), B sqrt(t), C/sqrt(t), D/sqrt(t))
rescaled by 2 sqrt(t); transition kernels replace (c, d) by the pair
determined by the starting point.

All measures are MixedMeasure values: a continuous part parametrized by the
angle theta (x = center + half_width * cos(theta)) with a Gauss-Legendre rule
fixed at construction, plus atoms.
"""
import cmath
import logging
import math
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..config import get_settings
from ..errors import DomainError, FanRegionViolation, QuadratureFailure, UnsupportedAtomConfiguration
from ..models import AwParams, FrozenModel
from .qcalc import qpoch, qpoch_product
from .quadrature import integrate_theta, theta_rule

logger = logging.getLogger(__name__)

ThetaWeight = Callable[[np.ndarray], np.ndarray]


class Atom(FrozenModel):
    location: float
    mass: float


class MixedMeasure(BaseModel):
    """Compactly supported law: angle-parametrized density plus atoms."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    center: float
    half_width: float
    weight: Optional[ThetaWeight] = None
    atoms: tuple[Atom, ...] = ()
    n_nodes: int = 0
    nodes: np.ndarray
    weights: np.ndarray

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def build(
        cls,
        center: float,
        half_width: float,
        weight: Optional[ThetaWeight],
        atoms: Sequence[Atom] = (),
    ) -> "MixedMeasure":
        """Fix the quadrature rule by refining until the continuous mass converges."""
        if weight is None:
            nodes = np.zeros(0)
            weights = np.zeros(0)
            n = 0
        else:
            _, n = integrate_theta(weight)
            theta, w = theta_rule(n)
            nodes = center + half_width * np.cos(theta)
            weights = w * weight(theta)
        return cls(
            center=center,
            half_width=half_width,
            weight=weight,
            atoms=tuple(atoms),
            n_nodes=n,
            nodes=nodes,
            weights=weights,
        )

    @classmethod
    def point_mass(cls, location: float) -> "MixedMeasure":
        return cls.build(location, 0.0, None, [Atom(location=location, mass=1.0)])

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def lo(self) -> float:
        return self.center - self.half_width

    @property
    def hi(self) -> float:
        return self.center + self.half_width

    @property
    def continuous_mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def total_mass(self) -> float:
        return self.continuous_mass + sum(a.mass for a in self.atoms)

    def support(self) -> tuple[float, float]:
        """Smallest interval holding the continuous part and all atoms."""
        points = [a.location for a in self.atoms]
        if self.weight is not None:
            points += [self.lo, self.hi]
        return min(points), max(points)

    def points_and_masses(self) -> tuple[np.ndarray, np.ndarray]:
        locs = np.array([a.location for a in self.atoms], dtype=float)
        masses = np.array([a.mass for a in self.atoms], dtype=float)
        return np.concatenate([self.nodes, locs]), np.concatenate([self.weights, masses])

    def density(self, x: float) -> float:
        """Density of the continuous part at an interior point."""
        if self.weight is None:
            return 0.0
        u = (x - self.center) / self.half_width
        if abs(u) >= 1.0:
            return 0.0
        theta = np.array([math.acos(u)])
        return float(self.weight(theta)[0]) / (self.half_width * math.sqrt(1.0 - u * u))

    def expect(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integral of a vectorized function with the construction-time rule."""
        x, m = self.points_and_masses()
        return float(np.sum(m * f(x)))

    def expect_adaptive(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integral of f with node doubling until the continuous part converges."""
        atom_part = sum(a.mass * float(f(np.array([a.location]))[0]) for a in self.atoms)
        if self.weight is None:
            return atom_part
        weight, c, h = self.weight, self.center, self.half_width
        value, _ = integrate_theta(lambda th: weight(th) * f(c + h * np.cos(th)), self.n_nodes)
        return value + atom_part

    def moment(self, k: int) -> float:
        return self.expect(lambda x: x**k)

    def mean(self) -> float:
        return self.expect(lambda x: x) / self.total_mass

    def variance(self) -> float:
        mu = self.mean()
        return self.expect(lambda x: (x - mu) ** 2) / self.total_mass

    def scaled(self, factor: float, shift: float = 0.0) -> "MixedMeasure":
        """Law of factor * X + shift (factor > 0)."""
        if factor <= 0:
            raise DomainError("scaling factor must be positive", factor=factor)
        return MixedMeasure(
            center=factor * self.center + shift,
            half_width=factor * self.half_width,
            weight=self.weight,
            atoms=tuple(Atom(location=factor * a.location + shift, mass=a.mass) for a in self.atoms),
            n_nodes=self.n_nodes,
            nodes=factor * self.nodes + shift,
            weights=self.weights,
        )


class SupportEnvelope(FrozenModel):
    """Upper and lower support bounds of W_t = sqrt(1-q) Z_t."""

    aw: AwParams

    def upper(self, t: float) -> float:
        A, C = self.aw.A, self.aw.C
        if C > 0 and t <= C * C:
            return C + t / C
        if A > 0 and t >= 1.0 / (A * A):
            return A * t + 1.0 / A
        return 2.0 * math.sqrt(t)

    def lower(self, t: float) -> float:
        B, D = self.aw.B, self.aw.D
        if D < 0 and t <= D * D:
            return D + t / D
        if B < 0 and t >= 1.0 / (B * B):
            return B * t + 1.0 / B
        return -2.0 * math.sqrt(t)


# ============================================================================
# Askey-Wilson density and atoms
# ============================================================================

def _normalizer(params: Sequence[complex], q: float) -> float:
    a, b, c, d = params
    num = qpoch_product([q, a * b, a * c, a * d, b * c, b * d, c * d], q)
    den = qpoch(a * b * c * d, q)
    return complex(num / den).real / (2.0 * math.pi)


def aw_weight(a, b, c, d, q: float) -> ThetaWeight:
    """
    Angle weight g(theta) = f(cos theta) sin(theta) of the continuous part.

    Parameters may include one complex-conjugate pair; the returned weight is
    real.
    """
    params = [complex(p) for p in (a, b, c, d)]
    const = _normalizer(params, q)

    def weight(theta: np.ndarray) -> np.ndarray:
        z = np.exp(1j * np.asarray(theta))
        num = qpoch(z * z, q)
        den = 1.0
        for p in params:
            den = den * qpoch(p * z, q)
        return const * np.abs(num / den) ** 2

    return weight


def aw_density(x: float, a, b, c, d, q: float) -> float:
    """Continuous Askey-Wilson density at x in (-1, 1)."""
    if abs(x) >= 1.0:
        raise DomainError(f"density defined on |x| < 1, got {x}", x=x)
    theta = np.array([math.acos(x)])
    return float(aw_weight(a, b, c, d, q)(theta)[0]) / math.sqrt(1.0 - x * x)


def aw_atoms(a, b, c, d, q: float) -> list[Atom]:
    """
    Atoms of nu(.; a, b, c, d, q) on the y-scale.

    Each real parameter e with |e| > 1 generates atoms at
    (e q^j + 1/(e q^j))/2 for |e q^j| >= 1.
    """
    tol = get_settings().atom_edge_tolerance
    params = [complex(p) for p in (a, b, c, d)]
    generators = []
    for i, p in enumerate(params):
        if abs(p.imag) > 0 or abs(p.real) <= 1.0:
            continue
        if abs(p.real) - 1.0 <= tol:
            logger.warning("dropping atom generator %.15g at the support edge", p.real)
            continue
        generators.append(i)
    for i, k in combinations(generators, 2):
        if (params[i] * params[k]).real >= 1.0:
            raise UnsupportedAtomConfiguration(
                "two atom generators with product >= 1",
                first=params[i].real,
                second=params[k].real,
            )

    abcd = params[0] * params[1] * params[2] * params[3]
    atoms: list[Atom] = []
    for i in generators:
        e = params[i]
        others = [p for k, p in enumerate(params) if k != i]
        o1, o2, o3 = others
        p0 = (
            qpoch(e ** -2, q) * qpoch_product([o1 * o2, o1 * o3, o2 * o3], q)
            / (qpoch_product([o / e for o in others], q) * qpoch(abcd, q))
        )
        j = 0
        while abs(e * q**j) >= 1.0:
            eq = e * q**j
            ratio = qpoch(e * e, q, j) * (1 - e * e * q ** (2 * j))
            ratio = ratio / (qpoch(q, q, j) * (1 - e * e)) * (q / e) ** j
            for o in others:
                for k in range(j):
                    ratio = ratio * (1 - e * o * q**k) / (o - e * q ** (k + 1))
            mass = complex(p0 * ratio)
            location = ((eq + 1 / eq) / 2).real
            atoms.append(Atom(location=location, mass=mass.real))
            j += 1
            if q == 0.0:
                break
    return atoms


def aw_measure(a, b, c, d, q: float) -> MixedMeasure:
    """nu(dy; a, b, c, d, q) on the y-scale [-1, 1]."""
    return MixedMeasure.build(0.0, 1.0, aw_weight(a, b, c, d, q), aw_atoms(a, b, c, d, q))


# ============================================================================
# Process laws
# ============================================================================

def _require_fan(aw: AwParams) -> None:
    if aw.A * aw.C >= 1.0:
        raise FanRegionViolation(aw.A, aw.C)


def support_envelope(aw: AwParams) -> SupportEnvelope:
    _require_fan(aw)
    return SupportEnvelope(aw=aw)


def marginal_z(aw: AwParams, t: float) -> MixedMeasure:
    """Law of W_t = sqrt(1-q) Z_t."""
    _require_fan(aw)
    if t <= 0:
        raise DomainError("time must be positive", t=t)
    rt = math.sqrt(t)
    y = aw_measure(aw.A * rt, aw.B * rt, aw.C / rt, aw.D / rt, aw.q)
    return y.scaled(2.0 * rt)


def kernel_pair(w: float, s: float, t: float) -> tuple[complex, complex]:
    """
    Parameters (c, d) of the kernel started from W_s = w: the roots of
    z^2 - (w / sqrt(t)) z + s/t. At s = 0 this is (w / sqrt(t), 0).
    """
    p = w / math.sqrt(t)
    r = s / t
    disc = p * p - 4.0 * r
    if disc < 0:
        root = cmath.sqrt(disc)
        return (p + root) / 2, (p - root) / 2
    big = (p + math.copysign(math.sqrt(disc), p)) / 2 if p != 0 else math.sqrt(disc) / 2
    small = r / big if big != 0 else 0.0
    return complex(big), complex(small)


def transition_z(aw: AwParams, s: float, t: float, w: float) -> MixedMeasure:
    """Law of W_t given W_s = w, for 0 <= s < t (s = 0 is the limiting kernel)."""
    _require_fan(aw)
    if not 0 <= s < t:
        raise DomainError("transition requires 0 <= s < t", s=s, t=t)
    rt = math.sqrt(t)
    c, d = kernel_pair(w, s, t)
    y = aw_measure(aw.A * rt, aw.B * rt, c, d, aw.q)
    return y.scaled(2.0 * rt)


def moment_power(aw: AwParams, t: float, N: int) -> float:
    """E[(1 + t + sqrt(1-q) Z_t)^N]."""
    return marginal_z(aw, t).expect_adaptive(lambda w: (1.0 + t + w) ** N)


def derrida_partition(aw: AwParams, N: int) -> float:
    """
    K_N for q = 0 and |A|,|B|,|C|,|D| < 1 from the rational-kernel integral
    M * int_{-2}^{2} (2+x)^N sqrt(4-x^2) / prod_p (1 + p^2 - p x) dx.
    """
    params = (aw.A, aw.B, aw.C, aw.D)
    if aw.q != 0.0 or max(abs(p) for p in params) >= 1.0:
        raise DomainError("rational-kernel integral needs q = 0 and |A|,|B|,|C|,|D| < 1")
    pairs = [x * y for x, y in combinations(params, 2)]
    const = float(np.prod([1.0 - p for p in pairs])) / (2.0 * math.pi * (1.0 - aw.product))

    def integrand(theta: np.ndarray) -> np.ndarray:
        x = 2.0 * np.cos(theta)
        kernel = np.ones_like(x)
        for p in params:
            kernel = kernel * (1.0 + p * p - p * x)
        return (2.0 + x) ** N * 4.0 * np.sin(theta) ** 2 / kernel

    value, _ = integrate_theta(integrand)
    return const * value


def check_envelope(measure: MixedMeasure, aw: AwParams, t: float, tol: float = 1e-9) -> bool:
    """True when the measure's support lies inside [L(t), U(t)]."""
    env = SupportEnvelope(aw=aw)
    lo, hi = measure.support()
    return lo >= env.lower(t) - tol and hi <= env.upper(t) + tol


def check_mass(measure: MixedMeasure) -> None:
    tol = get_settings().mass_tolerance
    if abs(measure.total_mass - 1.0) > tol:
        raise QuadratureFailure(
            f"total mass {measure.total_mass:.12g} differs from 1", mass=measure.total_mass
        )
