"""
q-Pochhammer symbols and q-numbers.
"""
import logging
import math
from typing import Union

import numpy as np

from ..config import get_settings

logger = logging.getLogger(__name__)

Number = Union[float, complex, np.ndarray]


def truncation_depth(q: float, scale: float = 1.0) -> int:
    """Number of factors kept in an infinite product (1 - a q^j) with |a| <= scale."""
    if q == 0.0:
        return 1
    tail = get_settings().qpoch_tail / max(scale, 1.0)
    depth = max(1, math.ceil(math.log(tail) / math.log(q)))
    logger.debug("q-product truncated at %d factors (q=%g, |a|<=%g)", depth, q, scale)
    return depth


def qpoch(a: Number, q: float, n: float = math.inf) -> Number:
    """(a; q)_n = prod_{j<n} (1 - a q^j); n may be math.inf."""
    arr = np.asarray(a)
    if n == 0:
        return np.ones_like(arr, dtype=np.result_type(arr, float))[()]
    if math.isinf(n):
        scale = float(np.max(np.abs(arr))) if arr.size else 1.0
        n = truncation_depth(q, scale)
    powers = q ** np.arange(int(n), dtype=float)
    return np.prod(1.0 - arr[..., None] * powers, axis=-1)[()]


def qpoch_product(values, q: float, n: float = math.inf) -> Number:
    """(a1, a2, ...; q)_n as the product of the individual symbols."""
    out = 1.0
    for v in values:
        out = out * qpoch(v, q, n)
    return out


def q_number(n: int, q: float) -> float:
    """[n]_q = 1 + q + ... + q^(n-1); [0]_q = 0."""
    if n <= 0:
        return 0.0
    if q == 0.0:
        return 1.0
    return (1.0 - q**n) / (1.0 - q)
