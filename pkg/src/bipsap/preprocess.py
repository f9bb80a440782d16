"""Invertible rewrites from a general system down to a normalized knapsack.

Each rewrite records a step in a :class:`TransformTrail`. A trail can carry
solutions and solution counts of the rewritten instance back to the
instance it started from.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .model import BipInstance, BkpInstance, validate_instance, verify_bip, verify_bkp


# -- trail steps -------------------------------------------------------------

@dataclass(frozen=True)
class Aggregate:
    multipliers: tuple[int, ...]
    rows: tuple[int, ...]


@dataclass(frozen=True)
class FlipColumn:
    j: int
    bound: int


@dataclass(frozen=True)
class DropZeroColumn:
    j: int
    multiplicity: int
    value: int = 0


@dataclass(frozen=True)
class FixVariable:
    j: int
    value: int


@dataclass(frozen=True)
class BranchMarker:
    """Labels a branch. A non-None payload is a closed-form solution in the
    coordinates the branch started from; pulling back replaces x with it."""

    branch_id: int
    payload: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class AppendForcedUnitVariable:
    index: int


@dataclass(frozen=True)
class AppendSlackVariable:
    index: int
    bound: int


Step = Union[
    Aggregate, FlipColumn, DropZeroColumn, FixVariable, BranchMarker,
    AppendForcedUnitVariable, AppendSlackVariable,
]


@dataclass(frozen=True)
class TransformTrail:
    steps: tuple = ()
    # instance the trail ends at; when known, pullback checks its input against it
    target: Optional[Union[BipInstance, BkpInstance]] = None

    def then(self, *steps, target=None) -> "TransformTrail":
        return TransformTrail(self.steps + tuple(steps), target)

    def extend(self, other: "TransformTrail") -> "TransformTrail":
        return TransformTrail(self.steps + other.steps, other.target)

    def __len__(self):
        return len(self.steps)


class Verdict(enum.Enum):
    INFEASIBLE = "infeasible"
    ZERO = "zero"  # only the all-zero assignment on the kept columns


@dataclass(frozen=True)
class Branch:
    """One piece of the partition produced by :func:`enforce_small_coeffs`."""

    trail: TransformTrail
    instance: Optional[BkpInstance] = None
    solution: Optional[tuple[int, ...]] = None

    @property
    def infeasible(self) -> bool:
        return self.instance is None and self.solution is None


# -- rewrites ----------------------------------------------------------------

def aggregation_multiplier(row: Sequence[int], rhs: int, u: Sequence[int]) -> int:
    """Strictly exceeds ``|row . x - rhs|`` for every x in the box."""
    return 1 + sum(abs(a) * ui for a, ui in zip(row, u)) + abs(rhs)


def aggregate(bip: BipInstance) -> tuple[BipInstance, TransformTrail]:
    """Fold all rows into one equation with the same box solutions."""
    problems = validate_instance(bip)
    if problems:
        raise ValueError("; ".join(problems))
    if bip.m == 1:
        return bip, TransformTrail(target=bip)
    row, rhs = list(bip.A[0]), bip.b[0]
    multipliers = []
    for nxt, nrhs in zip(bip.A[1:], bip.b[1:]):
        M = aggregation_multiplier(row, rhs, bip.u)
        multipliers.append(M)
        row = [p + M * q for p, q in zip(row, nxt)]
        rhs = rhs + M * nrhs
    single = BipInstance((row,), (rhs,), bip.u)
    step = Aggregate(tuple(multipliers), tuple(range(bip.m)))
    return single, TransformTrail((step,), single)


def positivize(
    a: Sequence[int], b: int, u: Sequence[int]
) -> tuple[Union[BkpInstance, Verdict], TransformTrail]:
    """Flip negative columns and drop zero columns of one equation.

    Returns a knapsack when the result has ``b >= 1``. Otherwise returns a
    verdict: INFEASIBLE when ``b < 0``, or when no columns remain and
    ``b != 0``; ZERO when ``b == 0``.
    """
    a, u = list(a), list(u)
    if len(a) != len(u):
        raise ValueError("coefficient and bound lengths differ")
    steps: list = []
    for j in range(len(a)):
        if a[j] < 0:
            b += -a[j] * u[j]
            a[j] = -a[j]
            steps.append(FlipColumn(j, u[j]))
    # highest index first keeps recorded indices in original coordinates
    for j in reversed(range(len(a))):
        if a[j] == 0:
            steps.append(DropZeroColumn(j, u[j] + 1, 0))
            del a[j], u[j]
    trail = TransformTrail(tuple(steps))
    if b < 0 or (not a and b != 0):
        return Verdict.INFEASIBLE, trail
    if b == 0:
        return Verdict.ZERO, trail
    bkp = BkpInstance(a, b, u)
    return bkp, TransformTrail(tuple(steps), bkp)


def enforce_small_coeffs(bkp: BkpInstance) -> list[Branch]:
    """Split into branches whose knapsacks all have ``a_i < b``.

    A coefficient above ``b`` forces its variable to 0. A coefficient equal
    to ``b`` gives the closed-form branch ``x_i = 1``, everything else 0,
    and otherwise forces ``x_i = 0``. The residual branch comes last.
    """
    problems = validate_instance(bkp)
    if problems:
        raise ValueError("; ".join(problems))
    branches: list[Branch] = []
    for i, ai in enumerate(bkp.a):
        if ai == bkp.b:
            x = tuple(1 if j == i else 0 for j in range(bkp.n))
            marker = BranchMarker(len(branches), x)
            branches.append(Branch(TransformTrail((marker,)), solution=x))
    fixed = [j for j, aj in enumerate(bkp.a) if aj >= bkp.b]
    steps = [FixVariable(j, 0) for j in reversed(fixed)]
    keep = [j for j in range(bkp.n) if j not in fixed]
    marker = BranchMarker(len(branches))
    if not keep:
        branches.append(Branch(TransformTrail((*steps, marker))))
        return branches
    residual = BkpInstance([bkp.a[j] for j in keep], bkp.b, [bkp.u[j] for j in keep])
    branches.append(Branch(TransformTrail((*steps, marker), residual), instance=residual))
    return branches


def append_forced_unit(bkp: BkpInstance) -> tuple[BkpInstance, TransformTrail]:
    """Append a 0/1 variable that every solution must set to 1.

    The new instance satisfies ``sum a'u' != 2b'`` and keeps every
    coefficient below ``b'``; both facts, and the fact that the new variable
    cannot be 0 in a solution, are checked here.
    """
    n, u_max = bkp.n, bkp.u_max
    extra = u_max * (n + 1) * bkp.b
    out = BkpInstance(bkp.a + (extra,), bkp.b + extra, bkp.u + (1,))
    trail = TransformTrail((AppendForcedUnitVariable(n),), out)
    if out.weighted_box_sum() == 2 * out.b:
        # not reachable when a_i < b; kept as a guarded fallback
        again, more = append_forced_unit(out)
        return again, trail.extend(more)
    if any(a >= out.b for a in out.a):
        raise AssertionError(f"surface transform produced a coefficient >= b' for {bkp}")
    if bkp.weighted_box_sum() >= out.b:
        # otherwise some solution could set the new variable to 0
        raise AssertionError(f"surface transform cannot exclude x_(n+1) = 0 for {bkp}")
    return out, trail


def ensure_not_double_b(bkp: BkpInstance) -> tuple[BkpInstance, TransformTrail]:
    if bkp.weighted_box_sum() != 2 * bkp.b:
        return bkp, TransformTrail(target=bkp)
    return append_forced_unit(bkp)


def force_surface(bkp: BkpInstance) -> tuple[BkpInstance, TransformTrail]:
    """Apply the 0/1-variable transform exactly once, whether or not
    ``ensure_not_double_b`` would have. Afterwards every solution touches the
    box surface (its last coordinate is at its bound)."""
    out, trail = ensure_not_double_b(bkp)
    if out is bkp:
        return append_forced_unit(bkp)
    return out, trail


# -- pullback ----------------------------------------------------------------

def _invert(step, x: list[int]) -> list[int]:
    if isinstance(step, (Aggregate,)):
        return x
    if isinstance(step, FlipColumn):
        x[step.j] = step.bound - x[step.j]
        return x
    if isinstance(step, DropZeroColumn):
        x.insert(step.j, step.value)
        return x
    if isinstance(step, FixVariable):
        x.insert(step.j, step.value)
        return x
    if isinstance(step, BranchMarker):
        return list(step.payload) if step.payload is not None else x
    if isinstance(step, (AppendForcedUnitVariable, AppendSlackVariable)):
        del x[step.index]
        return x
    raise TypeError(f"unknown trail step {step!r}")


def _solves(inst, x) -> bool:
    if len(x) != inst.n:
        return False
    if isinstance(inst, BkpInstance):
        return verify_bkp(inst, x)
    return verify_bip(inst, x)


def pullback_solution(trail: TransformTrail, x: Sequence[int]) -> tuple[int, ...]:
    if trail.target is not None and not _solves(trail.target, x):
        raise ValueError(f"{tuple(x)} does not solve the transformed instance")
    out = list(x)
    for step in reversed(trail.steps):
        out = _invert(step, out)
    return tuple(out)


def pullback_count(trail: TransformTrail, count: int) -> int:
    for step in trail.steps:
        if isinstance(step, DropZeroColumn):
            count *= step.multiplicity
    return count


def verdict_solution(trail: TransformTrail, n: int) -> tuple[int, ...]:
    """Pull back the all-zero assignment behind a ZERO verdict on ``n`` columns."""
    dropped = sum(isinstance(s, DropZeroColumn) for s in trail.steps)
    return pullback_solution(TransformTrail(trail.steps), [0] * (n - dropped))


# -- optimization by bisection -----------------------------------------------

def objective_range(c: Sequence[int], u: Sequence[int]) -> tuple[int, int]:
    lo = sum(min(ci * ui, 0) for ci, ui in zip(c, u))
    hi = sum(max(ci * ui, 0) for ci, ui in zip(c, u))
    return lo, hi


def threshold_instance(bip: BipInstance, c: Sequence[int], t: int) -> BipInstance:
    """``bip`` plus ``c . x + s = t`` with one slack ``s``.

    The slack bound is ``U - L`` (at least 1, since bounds must be
    positive), which makes the probe feasible exactly when some feasible x
    has ``c . x <= t`` for ``t`` in ``[L, U]``.
    """
    lo, hi = objective_range(c, bip.u)
    A = [tuple(row) + (0,) for row in bip.A] + [tuple(c) + (1,)]
    return BipInstance(A, bip.b + (t,), bip.u + (max(hi - lo, 1),))


def binary_search_optimize(
    bip: BipInstance,
    c: Sequence[int],
    solver: Callable[[BipInstance], Optional[Sequence[int]]],
) -> Optional[tuple[tuple[int, ...], int]]:
    """Minimize ``c . x`` using only a feasibility solver.

    Probes ``t = U`` first, then bisects on ``[L, U]``; at most
    ``ceil(log2(U - L + 1)) + 1`` probes.
    """
    if len(c) != bip.n:
        raise ValueError(f"objective has length {len(c)}, expected {bip.n}")
    lo, hi = objective_range(c, bip.u)
    slack = TransformTrail((AppendSlackVariable(bip.n, max(hi - lo, 1)),))

    def probe(t):
        x = solver(threshold_instance(bip, c, t))
        return None if x is None else pullback_solution(slack, x)

    best = probe(hi)
    if best is None:
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        x = probe(mid)
        if x is None:
            lo = mid + 1
        else:
            hi, best = mid, x
    value = sum(ci * xi for ci, xi in zip(c, best))
    if value != hi:
        raise AssertionError(f"bisection ended at {hi} but solution has value {value}")
    return best, value
