"""The equation ``x_1 + l x_2 + ... + l^n x_(n+1) = gamma * t`` with
``gamma = 1 + l + ... + l^n``.

It has the constant solution ``(t, ..., t)``. Every other integral
solution is ``x_1 = t + l t_1``, ``x_k = t + l t_k - t_(k-1)``,
``x_(n+1) = t - t_n`` for integers ``t_1 .. t_n``, not all zero. At the
first nonzero ``t_j`` this gives ``x_j = t + l t_j``, so some component has
magnitude at least ``|l| - |t|``. This module checks all of that by
exhaustive search over a box.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .model import BudgetExceeded

DEFAULT_DIO_BUDGET = 10**7


@dataclass(frozen=True)
class DioInstance:
    lam: int
    n: int
    t: int
    gamma: int = 0  # filled in from lam and n when left at 0

    def __post_init__(self):
        if abs(self.lam) < 2:
            raise ValueError("|lambda| must be at least 2")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        gamma = sum(self.lam**i for i in range(self.n + 1))
        if self.gamma == 0:
            object.__setattr__(self, "gamma", gamma)
        elif self.gamma != gamma:
            raise ValueError(f"gamma must be {gamma} for lambda={self.lam}, n={self.n}")

    def lhs(self, x: Sequence[int]) -> int:
        return sum(self.lam**i * xi for i, xi in enumerate(x))

    def satisfied_by(self, x: Sequence[int]) -> bool:
        if len(x) != self.n + 1:
            raise ValueError(f"vector has length {len(x)}, expected {self.n + 1}")
        return self.lhs(x) == self.gamma * self.t


def dio_enumerate(inst: DioInstance, box: int, budget: int = DEFAULT_DIO_BUDGET) -> list[tuple[int, ...]]:
    """All solutions with every ``|x_i| <= box``, in lexicographic order.

    Components are fixed from the highest power down; a branch is cut when
    the lower powers can no longer close the gap to the right-hand side.
    ``budget`` caps the number of search nodes.
    """
    if box < 1:
        raise ValueError("box must be a positive integer")
    lam, n = inst.lam, inst.n
    # reach[k]: largest |x_1 + ... + l^(k-1) x_k| over the box
    reach = [0] * (n + 2)
    for k in range(1, n + 2):
        reach[k] = reach[k - 1] + box * abs(lam) ** (k - 1)
    out: list[tuple[int, ...]] = []
    x = [0] * (n + 1)
    nodes = 0

    def rec(k: int, rest: int):
        # choose x_k (1-based); rest must equal x_1 + ... + l^(k-1) x_k
        nonlocal nodes
        if k == 1:
            if -box <= rest <= box:
                x[0] = rest
                out.append(tuple(x))
            return
        w = lam ** (k - 1)
        for v in range(-box, box + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"search exceeded {budget} nodes")
            left = rest - w * v
            if abs(left) <= reach[k - 1]:
                x[k - 1] = v
                rec(k - 1, left)

    rec(n + 1, inst.gamma * inst.t)
    out.sort()
    return out


def dio_parameterize(inst: DioInstance, x: Sequence[int]) -> Optional[tuple[int, ...]]:
    """``(t_1, ..., t_n)`` for a solution ``x``; None if ``x`` is not one.

    Raises AssertionError if a solution fails to parameterize, which would
    contradict the structure stated in the module docstring.
    """
    if not inst.satisfied_by(x):
        return None
    lam, t = inst.lam, inst.t
    params: list[int] = []
    prev = 0
    for xk in x[:-1]:
        q, r = divmod(xk - t + prev, lam)
        if r:
            raise AssertionError(f"{tuple(x)} solves the equation but does not parameterize")
        params.append(q)
        prev = q
    if x[-1] - t != -prev:
        raise AssertionError(f"{tuple(x)} solves the equation but breaks the last relation")
    return tuple(params)


def dio_reconstruct(inst: DioInstance, params: Sequence[int]) -> tuple[int, ...]:
    if len(params) != inst.n:
        raise ValueError(f"expected {inst.n} parameters, got {len(params)}")
    lam, t = inst.lam, inst.t
    x, prev = [], 0
    for tk in params:
        x.append(t + lam * tk - prev)
        prev = tk
    x.append(t - prev)
    return tuple(x)


def dio_lemma_failures(
    inst: DioInstance, box: int, budget: int = DEFAULT_DIO_BUDGET
) -> list[tuple[tuple[int, ...], str]]:
    """Box solutions that break the large-component bound or the
    parameterization, each with a reason."""
    constant = (inst.t,) * (inst.n + 1)
    bound = abs(inst.lam) - abs(inst.t)
    failures = []
    for x in dio_enumerate(inst, box, budget):
        try:
            params = dio_parameterize(inst, x)
        except AssertionError as exc:
            failures.append((x, str(exc)))
            continue
        if dio_reconstruct(inst, params) != x:
            failures.append((x, "reconstruction differs"))
        if x != constant and max(abs(v) for v in x) < bound:
            failures.append((x, f"largest component below {bound}"))
    return failures


def dio_check_lemma(inst: DioInstance, box: int, budget: int = DEFAULT_DIO_BUDGET) -> bool:
    return not dio_lemma_failures(inst, box, budget)
