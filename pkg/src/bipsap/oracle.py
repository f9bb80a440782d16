"""Brute-force reference answers over the whole box.

These loops are deliberately naive. They exist to check the lattice route,
so nothing here may share code with it beyond the instance types.
"""

from __future__ import annotations

import itertools
import math
from typing import Optional, Sequence

from .model import BipInstance, BudgetExceeded, validate_instance

DEFAULT_BOX_BUDGET = 10**7


def _box(inst: BipInstance, budget: int):
    problems = validate_instance(inst)
    if problems:
        raise ValueError("; ".join(problems))
    size = math.prod(u + 1 for u in inst.u)
    if size > budget:
        raise BudgetExceeded(f"box has {size} points, budget is {budget}")
    # product() yields points in lexicographic order
    return itertools.product(*(range(u + 1) for u in inst.u))


def _satisfies(inst: BipInstance, x) -> bool:
    for row, bi in zip(inst.A, inst.b):
        if sum(a * v for a, v in zip(row, x)) != bi:
            return False
    return True


def oracle_solve(inst: BipInstance, budget: int = DEFAULT_BOX_BUDGET) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest box solution, or None."""
    for x in _box(inst, budget):
        if _satisfies(inst, x):
            return x
    return None


def oracle_count(inst: BipInstance, budget: int = DEFAULT_BOX_BUDGET) -> int:
    count = 0
    for x in _box(inst, budget):
        residual = [bi - sum(a * v for a, v in zip(row, x)) for row, bi in zip(inst.A, inst.b)]
        if not any(residual):
            count += 1
    return count


def oracle_solutions(inst: BipInstance, budget: int = DEFAULT_BOX_BUDGET) -> list[tuple[int, ...]]:
    return [x for x in _box(inst, budget) if _satisfies(inst, x)]


def oracle_optimize(
    inst: BipInstance, c: Sequence[int], budget: int = DEFAULT_BOX_BUDGET
) -> Optional[tuple[tuple[int, ...], int]]:
    """Minimize ``c . x``; ties go to the lexicographically smallest x."""
    if len(c) != inst.n:
        raise ValueError(f"objective has length {len(c)}, expected {inst.n}")
    best = None
    for x in _box(inst, budget):
        if _satisfies(inst, x):
            value = sum(ci * xi for ci, xi in zip(c, x))
            if best is None or value < best[1]:
                best = (x, value)
    return best
