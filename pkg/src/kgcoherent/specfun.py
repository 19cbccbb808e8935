"""Associated Laguerre polynomials and factorial-ratio weights for the Landau sums."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LaguerreOrder:
    """Validated (n, alpha) order pair; alpha is a nonnegative integer here."""

    n: int
    alpha: int

    def __post_init__(self):
        if self.n < 0 or self.alpha < 0:
            raise ValueError("n and alpha must be nonnegative integers")


def laguerre(n: int, alpha: int, x: float) -> float:
    """L_n^alpha(x) by upward three-term recurrence (stable for this regime)."""
    LaguerreOrder(n, alpha)
    prev = 1.0
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(2, n + 1):
        prev, cur = cur, ((2 * k - 1 + alpha - x) * cur - (k - 1 + alpha) * prev) / k
    return cur


def laguerre_column(n_max: int, alpha: int, x: float) -> np.ndarray:
    """All of L_0^alpha(x) .. L_{n_max}^alpha(x) in one recurrence pass."""
    LaguerreOrder(n_max, alpha)
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 1.0 + alpha - x
    for k in range(2, n_max + 1):
        out[k] = ((2 * k - 1 + alpha - x) * out[k - 1] - (k - 1 + alpha) * out[k - 2]) / k
    return out


def log_fact_ratio(n: int, ell: int) -> float:
    """ln(n! / (n+ell)!) = -sum_{j=1..ell} ln(n+j), accumulated with fsum."""
    if n < 0 or ell < 0:
        raise ValueError("n and ell must be nonnegative integers")
    return -math.fsum(math.log(n + j) for j in range(1, ell + 1))
