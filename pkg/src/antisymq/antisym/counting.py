"""Number of distinct target/projectile slot assignments."""

from __future__ import annotations

import math


def _check(n_target: int, n_projectile: int) -> None:
    if n_target < 1 or n_projectile < 1:
        raise ValueError("particle counts must be at least 1")


def n_perm_binomial(n_target: int, n_projectile: int) -> int:
    _check(n_target, n_projectile)
    return math.comb(n_target + n_projectile, n_projectile)


def n_perm_sum(n_target: int, n_projectile: int) -> int:
    """1 + sum over exchange counts k of C(N_T, k) C(N_p, k)."""
    _check(n_target, n_projectile)
    if n_projectile > n_target:
        raise ValueError("need N_p <= N_T")
    return 1 + sum(
        math.comb(n_target, k) * math.comb(n_projectile, k) for k in range(1, n_projectile + 1)
    )
