"""
Gauss-Legendre rules on [0, pi] for integrals written in the angle variable.

Densities on an interval [c - h, c + h] are integrated after the substitution
x = c + h cos(theta), which turns the square-root endpoint behaviour of the
Askey-Wilson and semicircle laws into a smooth periodic integrand.
"""
import logging
from functools import lru_cache
from typing import Callable

import numpy as np

from ..config import get_settings
from ..errors import QuadratureFailure

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def theta_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule mapped to [0, pi]."""
    x, w = np.polynomial.legendre.leggauss(n)
    theta = 0.5 * np.pi * (x + 1.0)
    weights = 0.5 * np.pi * w
    theta.setflags(write=False)
    weights.setflags(write=False)
    return theta, weights


def integrate_theta(
    integrand: Callable[[np.ndarray], np.ndarray],
    n_start: int | None = None,
    strict: bool = True,
) -> tuple[float, int]:
    """
    Integrate a smooth function of theta over [0, pi], doubling the node count
    until successive values agree. Returns (value, nodes used).
    """
    settings = get_settings()
    n = n_start or settings.quadrature_nodes
    theta, w = theta_rule(n)
    vals = w * integrand(theta)
    value = float(np.sum(vals))
    while 2 * n <= settings.quadrature_max_nodes:
        theta2, w2 = theta_rule(2 * n)
        vals2 = w2 * integrand(theta2)
        value2 = float(np.sum(vals2))
        scale = max(abs(value2), float(np.sum(np.abs(vals2))), 1e-300)
        if abs(value2 - value) <= settings.quadrature_tolerance * scale:
            return value2, 2 * n
        logger.debug("theta quadrature refined %d -> %d nodes", n, 2 * n)
        n, value = 2 * n, value2
    if strict:
        raise QuadratureFailure(f"no convergence with {n} nodes", nodes=n, value=value)
    logger.warning("theta quadrature stopped at %d nodes without convergence", n)
    return value, n
