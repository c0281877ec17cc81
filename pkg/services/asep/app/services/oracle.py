"""
Exact Markov chain on {0,1}^N.

Configurations are integers in [0, 2^N): bit j-1 holds site j, so site 1 is
the least significant bit. Labels print sites left to right ("tau_1...tau_N").
"""
import logging
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict

from ..config import get_settings
from ..dependencies import get_solver
from ..errors import LengthMismatch, SingularSystem, SizeLimitExceeded
from ..models import AsepParams

logger = logging.getLogger(__name__)


class StationaryTable(BaseModel):
    """Stationary law of the chain on N sites, indexed by configuration."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    N: int
    probs: np.ndarray

    def occupation_bits(self) -> np.ndarray:
        return occupation_bits(self.N)


def occupation_bits(N: int) -> np.ndarray:
    """(2^N, N) array with entry [s, j-1] = tau_j of configuration s."""
    states = np.arange(2**N)[:, None]
    return ((states >> np.arange(N)[None, :]) & 1).astype(np.int8)


def configuration_label(index: int, N: int) -> str:
    return "".join(str((index >> j) & 1) for j in range(N))


# ============================================================================
# Generator
# ============================================================================

def build_generator(asep: AsepParams, N: int) -> sp.csr_matrix:
    """Sparse rate matrix Q with Q[s, s'] the rate of s -> s' and zero row sums."""
    limit = get_settings().oracle_max_sites
    if N < 1 or N > limit:
        raise SizeLimitExceeded(f"oracle supports 1 <= N <= {limit}, got {N}", N=N, limit=limit)
    states = np.arange(2**N, dtype=np.int64)
    first, last = 1, 1 << (N - 1)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []

    def add(mask: np.ndarray, flip: int, rate: float) -> None:
        if rate == 0.0:
            return
        src = states[mask]
        rows.append(src)
        cols.append(src ^ flip)
        vals.append(np.full(len(src), rate))

    add((states & first) == 0, first, asep.alpha)
    add((states & first) != 0, first, asep.gamma)
    add((states & last) == 0, last, asep.delta)
    add((states & last) != 0, last, asep.beta)
    for k in range(N - 1):
        here, there = 1 << k, 1 << (k + 1)
        occupied_here = (states & here) != 0
        occupied_there = (states & there) != 0
        add(occupied_here & ~occupied_there, here | there, 1.0)
        add(~occupied_here & occupied_there, here | there, asep.q)

    row = np.concatenate(rows)
    col = np.concatenate(cols)
    val = np.concatenate(vals)
    size = len(states)
    off = sp.coo_matrix((val, (row, col)), shape=(size, size)).tocsr()
    exit_rates = np.asarray(off.sum(axis=1)).ravel()
    return (off - sp.diags(exit_rates)).tocsr()


# ============================================================================
# Stationary law
# ============================================================================

def balance_residual(table: StationaryTable, generator: sp.csr_matrix) -> float:
    """||pi Q||_inf."""
    return float(np.max(np.abs(generator.T @ table.probs)))


def stationary(generator: sp.csr_matrix) -> StationaryTable:
    size = generator.shape[0]
    N = size.bit_length() - 1
    if size != 2**N:
        raise LengthMismatch(f"generator size {size} is not a power of two", size=size)
    pi = get_solver(N).solve(generator)
    if np.min(pi) < -1e-12:
        raise SingularSystem("stationary solve produced negative probabilities", min=float(np.min(pi)))
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    table = StationaryTable(N=N, probs=pi)
    residual = balance_residual(table, generator)
    logger.info("stationary law on N=%d sites, balance residual %.3g", N, residual)
    if residual > 1e-10:
        raise SingularSystem(f"balance residual {residual:.3g} exceeds 1e-10", residual=residual)
    return table


def stationary_table(asep: AsepParams, N: int) -> StationaryTable:
    return stationary(build_generator(asep, N))


# ============================================================================
# Observables
# ============================================================================

def joint_gf(table: StationaryTable, t: Sequence[float]) -> float:
    """sum over configurations of pi(config) * prod_j t_j^tau_j."""
    t = np.asarray(t, dtype=float)
    if t.shape != (table.N,):
        raise LengthMismatch(f"expected {table.N} values, got {t.size}", N=table.N, length=int(t.size))
    bits = table.occupation_bits().astype(bool)
    weights = np.prod(np.where(bits, t[None, :], 1.0), axis=1)
    return float(table.probs @ weights)


def occupancy_profile(table: StationaryTable) -> np.ndarray:
    """<tau_j> for j = 1..N."""
    return table.occupation_bits().T @ table.probs


def count_distribution(table: StationaryTable) -> np.ndarray:
    """P(sum_j tau_j = k) for k = 0..N."""
    counts = table.occupation_bits().sum(axis=1)
    return np.bincount(counts, weights=table.probs, minlength=table.N + 1)
