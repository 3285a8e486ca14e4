"""Endpoint test of the Nikiforov-Uvarov weight condition on (0, 1).

Orthogonality of the polynomial solutions requires sigma(s) rho(s) s^k to
vanish at both ends of the interval.  With sigma(s) = s (1 - a3 s) and
rho(s) = s^a10 (1 - a3 s)^a11, the s = 1 value is (1 - a3)^(1 + a11), which
for a3 = -1 is 2^(1 + a11) regardless of k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

K_LIMIT = 20


@dataclass(frozen=True)
class NuParams:
    a10: float
    a11: float
    k_max: int = 3
    a3: float = -1.0

    def __post_init__(self):
        if not 0 <= self.k_max <= K_LIMIT:
            raise ValueError(f"k_max must lie in [0, {K_LIMIT}], got {self.k_max}")


def weight_product(p: NuParams, k: int, s):
    """s^(k+1) (1 - a3 s) s^a10 (1 - a3 s)^a11."""
    s = np.asarray(s, dtype=float)
    base = 1.0 - p.a3 * s
    return s ** (k + 1) * base * s**p.a10 * base**p.a11


def weight_condition_values(p: NuParams) -> list[tuple[int, float, float]]:
    """(k, value at s=0, value at s=1) for k = 0..k_max."""
    return [(k, float(weight_product(p, k, 0.0)), float(weight_product(p, k, 1.0)))
            for k in range(p.k_max + 1)]


def condition_violated(p: NuParams, atol: float = 0.0) -> bool:
    """True when some endpoint value is nonzero, i.e. the condition fails."""
    return any(abs(v0) > atol or abs(v1) > atol for _, v0, v1 in weight_condition_values(p))
