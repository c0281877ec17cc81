"""
Abstract base class for stationary solvers.

All backends must implement this interface.
"""
from abc import ABC, abstractmethod

import numpy as np
import scipy.sparse as sp


class StationarySolver(ABC):
    """Solves pi Q = 0, sum(pi) = 1 for an irreducible generator Q."""

    name: str = "base"

    @abstractmethod
    def solve(self, generator: sp.csr_matrix) -> np.ndarray:
        """Return the stationary probability vector."""
        pass

    @staticmethod
    def residual(pi: np.ndarray, generator: sp.csr_matrix) -> float:
        """Max-norm balance residual ||pi Q||_inf."""
        return float(np.max(np.abs(generator.T @ pi)))

    @staticmethod
    def augmented(generator: sp.csr_matrix) -> sp.csr_matrix:
        """Q^T with its last row replaced by ones (normalization)."""
        system = generator.T.tolil()
        system[-1, :] = np.ones(generator.shape[0])
        return system.tocsr()

    @staticmethod
    def rhs(size: int) -> np.ndarray:
        b = np.zeros(size)
        b[-1] = 1.0
        return b
