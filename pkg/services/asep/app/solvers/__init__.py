"""
Stationary-distribution solvers.

Backends share one interface so the oracle can swap a dense LU solve for an
iterative Krylov solve as the state space grows.
"""
from .base import StationarySolver
from .dense import DenseSolver
from .iterative import IterativeSolver

__all__ = ["StationarySolver", "DenseSolver", "IterativeSolver"]
