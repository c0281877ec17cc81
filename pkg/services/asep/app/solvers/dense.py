"""
Dense LU backend for small state spaces.
"""
import logging

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from ..errors import SingularSystem
from .base import StationarySolver

logger = logging.getLogger(__name__)


class DenseSolver(StationarySolver):
    """Replaces one balance equation by normalization and solves directly."""

    name = "dense"

    def solve(self, generator: sp.csr_matrix) -> np.ndarray:
        system = self.augmented(generator).toarray()
        try:
            pi = la.solve(system, self.rhs(system.shape[0]))
        except (la.LinAlgError, ValueError) as exc:
            raise SingularSystem(f"dense stationary solve failed: {exc}") from exc
        if not np.all(np.isfinite(pi)):
            raise SingularSystem("dense stationary solve produced non-finite values")
        logger.debug("dense solve on %d states, residual %.3g", len(pi), self.residual(pi, generator))
        return pi
