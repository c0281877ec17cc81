"""
Process-wide solver selection.
"""
import logging
from typing import Optional

from .config import get_settings
from .solvers import DenseSolver, IterativeSolver, StationarySolver

logger = logging.getLogger(__name__)


# Explicit override (set by tests or callers that want a fixed backend)
_solver: Optional[StationarySolver] = None


def get_solver(n_sites: int) -> StationarySolver:
    """
    Get the stationary solver for a chain on n_sites sites.

    Backend is determined by the ASEP_SOLVER_TYPE env var:
    - "dense": LU solve on the full matrix
    - "iterative": restarted GMRES on the sparse system
    - "auto": dense up to ASEP_DENSE_MAX_SITES sites, iterative above (default)
    """
    if _solver is not None:
        return _solver
    settings = get_settings()
    kind = settings.solver_type
    if kind == "auto":
        kind = "dense" if n_sites <= settings.dense_max_sites else "iterative"
    logger.info("using %s stationary solver for N=%d", kind, n_sites)
    if kind == "dense":
        return DenseSolver()
    return IterativeSolver(
        tolerance=settings.iterative_tolerance,
        restart=settings.iterative_restart,
        maxiter=settings.iterative_maxiter,
    )


def set_solver(solver: Optional[StationarySolver]) -> None:
    """Set the solver instance (for testing or switching implementations); None restores auto."""
    global _solver
    _solver = solver
