"""
Restarted GMRES backend for state spaces beyond the dense limit.
"""
import logging

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import SingularSystem
from .base import StationarySolver

logger = logging.getLogger(__name__)


class IterativeSolver(StationarySolver):
    """GMRES on the normalization-augmented system, warm-started from uniform."""

    name = "iterative"

    def __init__(self, tolerance: float = 1e-13, restart: int = 200, maxiter: int = 2000):
        self.tolerance = tolerance
        self.restart = restart
        self.maxiter = maxiter

    def solve(self, generator: sp.csr_matrix) -> np.ndarray:
        system = self.augmented(generator)
        size = system.shape[0]
        x0 = np.full(size, 1.0 / size)
        pi, info = spla.gmres(
            system,
            self.rhs(size),
            x0=x0,
            rtol=self.tolerance,
            atol=0.0,
            restart=min(self.restart, size),
            maxiter=self.maxiter,
        )
        if info < 0 or not np.all(np.isfinite(pi)):
            raise SingularSystem("GMRES breakdown in stationary solve", info=int(info))
        if info > 0:
            raise SingularSystem(
                f"GMRES did not reach tolerance {self.tolerance:g} within {info} iterations",
                info=int(info),
                residual=self.residual(pi, generator),
            )
        logger.info("iterative solve on %d states, residual %.3g", size, self.residual(pi, generator))
        return pi
