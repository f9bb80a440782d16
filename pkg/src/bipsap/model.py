"""Problem data for bounded integer programs and bounded knapsacks.

Everything is stored as plain Python ints (arbitrary precision), so no
verification path can round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union


class BudgetExceeded(RuntimeError):
    """An exhaustive scan or enumeration would exceed its configured budget."""


def _ints(values) -> tuple[int, ...]:
    return tuple(int(v) for v in values)


@dataclass(frozen=True)
class BipInstance:
    """System ``A x = b`` over the box ``0 <= x <= u``."""

    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    u: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(_ints(row) for row in self.A))
        object.__setattr__(self, "b", _ints(self.b))
        object.__setattr__(self, "u", _ints(self.u))

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.u)


@dataclass(frozen=True)
class BkpInstance:
    """Single equation ``a . x = b`` with positive data over ``0 <= x <= u``."""

    a: tuple[int, ...]
    b: int
    u: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", _ints(self.a))
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "u", _ints(self.u))

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def u_max(self) -> int:
        return max(self.u)

    def weighted_box_sum(self) -> int:
        """``sum a_j u_j``, the value compared against ``2b`` during normalization."""
        return sum(a * u for a, u in zip(self.a, self.u))

    def as_bip(self) -> BipInstance:
        return BipInstance((self.a,), (self.b,), self.u)


Instance = Union[BipInstance, BkpInstance]


def validate_instance(inst: Instance) -> list[str]:
    """Return human-readable violations; an empty list means well formed."""
    problems: list[str] = []
    if isinstance(inst, BkpInstance):
        if inst.n < 1:
            problems.append("a is empty")
        if len(inst.u) != inst.n:
            problems.append("dimension mismatch u")
        for i, a in enumerate(inst.a):
            if a < 1:
                problems.append(f"a[{i}] not positive")
        if inst.b < 1:
            problems.append("b not positive")
    elif isinstance(inst, BipInstance):
        if inst.m < 1:
            problems.append("A has no rows")
        if inst.n < 1:
            problems.append("u is empty")
        for r, row in enumerate(inst.A):
            if len(row) != inst.n:
                problems.append(f"dimension mismatch A[{r}]")
        if len(inst.b) != inst.m:
            problems.append("dimension mismatch b")
    else:
        raise TypeError(f"not an instance: {type(inst).__name__}")
    for i, u in enumerate(inst.u):
        if u < 1:
            problems.append(f"u[{i}] not positive")
    return problems


def _in_box(x: Sequence[int], u: Sequence[int]) -> bool:
    return all(0 <= xi <= ui for xi, ui in zip(x, u))


def verify_bkp(inst: BkpInstance, x: Sequence[int]) -> bool:
    if len(x) != inst.n:
        raise ValueError(f"assignment has length {len(x)}, expected {inst.n}")
    return _in_box(x, inst.u) and sum(a * xi for a, xi in zip(inst.a, x)) == inst.b


def verify_bip(inst: BipInstance, x: Sequence[int]) -> bool:
    if len(x) != inst.n:
        raise ValueError(f"assignment has length {len(x)}, expected {inst.n}")
    if not _in_box(x, inst.u):
        return False
    return all(
        sum(aij * xj for aij, xj in zip(row, x)) == bi
        for row, bi in zip(inst.A, inst.b)
    )
