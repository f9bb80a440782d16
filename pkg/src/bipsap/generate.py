"""Seeded random instances for tests, demos and the command line.

A planted instance is built around a random box point, so it is feasible
by construction; an unplanted one draws its right-hand side at random.
"""

from __future__ import annotations

import random
from typing import Optional

from .model import BipInstance, BkpInstance


def random_bkp(
    rng: random.Random,
    n: int,
    u_max: int,
    a_max: int,
    planted: bool = False,
) -> BkpInstance:
    a = [rng.randint(1, a_max) for _ in range(n)]
    u = [rng.randint(1, u_max) for _ in range(n)]
    if planted:
        while True:
            x = [rng.randint(0, ui) for ui in u]
            b = sum(ai * xi for ai, xi in zip(a, x))
            if b >= 1:
                break
    else:
        b = rng.randint(1, sum(ai * ui for ai, ui in zip(a, u)))
    return BkpInstance(a, b, u)


def random_bip(
    rng: random.Random,
    m: int,
    n: int,
    u_max: int,
    coeff_max: int,
    planted: bool = False,
) -> BipInstance:
    A = [[rng.randint(-coeff_max, coeff_max) for _ in range(n)] for _ in range(m)]
    u = [rng.randint(1, u_max) for _ in range(n)]
    if planted:
        x = [rng.randint(0, ui) for ui in u]
        b = [sum(aij * xj for aij, xj in zip(row, x)) for row in A]
    else:
        b = []
        for row in A:
            lo = sum(min(aij * uj, 0) for aij, uj in zip(row, u))
            hi = sum(max(aij * uj, 0) for aij, uj in zip(row, u))
            b.append(rng.randint(lo, hi))
    return BipInstance(A, b, u)


def bkp_suite(
    seed: int,
    count: int,
    n_max: int = 5,
    u_max: int = 4,
    a_max: int = 15,
    planted_every: Optional[int] = 2,
) -> list[BkpInstance]:
    """``count`` knapsacks with ``1 <= n <= n_max``; every
    ``planted_every``-th one is planted."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, n_max)
        planted = bool(planted_every) and i % planted_every == 0
        out.append(random_bkp(rng, n, u_max, a_max, planted))
    return out


def bip_suite(
    seed: int,
    count: int,
    m_max: int = 3,
    n_max: int = 4,
    u_max: int = 3,
    coeff_max: int = 6,
    planted_every: Optional[int] = 2,
) -> list[BipInstance]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        m, n = rng.randint(1, m_max), rng.randint(1, n_max)
        planted = bool(planted_every) and i % planted_every == 0
        out.append(random_bip(rng, m, n, u_max, coeff_max, planted))
    return out


def random_objective(rng: random.Random, n: int, c_max: int = 5) -> list[int]:
    return [rng.randint(-c_max, c_max) for _ in range(n)]
