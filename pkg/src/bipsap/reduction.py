"""The knapsack-to-lattice construction.

For a knapsack with ``n`` variables the basis is ``(2n+2) x (2n+2)`` and
lower triangular, with the block layout::

    diag(1/u)     0            0           0
    s0 * a        -s0 * b      0           0
    0             0            diag(1/u)   0
    s1 * C        s1*delta*l^n s1 * C      -s1 * gamma

where ``delta = prod(u)``, ``C_i = (delta / u_i) * l^(i-1)`` and
``gamma = 1 + l + ... + l^n``. A box solution ``x`` shows up as the vector
``(x/u, 0, 1 - x/u, 0)``. The vectors to avoid are those with
``sum a_i u_i y_i = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .model import BkpInstance, verify_bkp
from .sap import LatticeVector, Norm, SapQuery, forward_map


@dataclass(frozen=True)
class Params:
    s0: int
    s1: int
    lam: int
    gamma: int
    delta: int
    delta_i: tuple[int, ...]
    C: tuple[int, ...]
    u_max: int
    p: Fraction


@dataclass(frozen=True)
class ReductionArtifacts:
    basis: tuple[tuple[Fraction, ...], ...]
    params: Params
    subspace_functional: tuple[Fraction, ...]
    source: BkpInstance

    @property
    def dim(self) -> int:
        return len(self.basis)

    def query(self, norm: Norm = Norm.LINF, radius=1) -> SapQuery:
        return SapQuery(self.basis, self.subspace_functional, norm, Fraction(radius))

    def in_subspace(self, y: Sequence[Fraction]) -> bool:
        return sum(f * v for f, v in zip(self.subspace_functional, y)) == 0


def derived_params(bkp: BkpInstance, s0: int, s1: int, lam: int) -> Params:
    """Fill in everything that follows from ``s0``, ``s1`` and ``lam``."""
    n = bkp.n
    delta = math.prod(bkp.u)
    delta_i = tuple(delta // ui for ui in bkp.u)
    C = tuple(di * lam**i for i, di in enumerate(delta_i))
    gamma = sum(lam**i for i in range(n + 1))
    u_max = bkp.u_max
    p = min(Fraction(s0), Fraction(s1), Fraction(lam, delta * n * u_max))
    return Params(s0, s1, lam, gamma, delta, delta_i, C, u_max, p)


def choose_params(bkp: BkpInstance, safety: int = 1) -> Params:
    """Smallest admissible parameters: ``s0 = s1 = n^2 + 1`` and
    ``lam = K * delta * n^3 * u_max + 1``."""
    if safety < 1:
        raise ValueError("safety factor must be a positive integer")
    n = bkp.n
    s = n * n + 1
    lam = safety * math.prod(bkp.u) * n**3 * bkp.u_max + 1
    return derived_params(bkp, s, s, lam)


def check_params(bkp: BkpInstance, params: Params) -> list[str]:
    n = bkp.n
    problems = []
    if params.s0 <= n * n:
        problems.append("s0 must exceed n^2")
    if params.s1 <= n * n:
        problems.append("s1 must exceed n^2")
    if params.lam <= math.prod(bkp.u) * n**3 * bkp.u_max:
        problems.append("lambda must exceed delta * n^3 * u_max")
    if params != derived_params(bkp, params.s0, params.s1, params.lam):
        problems.append("derived quantities do not match s0, s1, lambda")
    return problems


def build_b0(bkp: BkpInstance, params: Params) -> ReductionArtifacts:
    problems = check_params(bkp, params)
    if problems:
        raise ValueError("; ".join(problems))
    n, d = bkp.n, 2 * bkp.n + 2
    zero = Fraction(0)
    B = [[zero] * d for _ in range(d)]
    for i, ui in enumerate(bkp.u):
        B[i][i] = Fraction(1, ui)
        B[n + 1 + i][n + 1 + i] = Fraction(1, ui)
    for j, aj in enumerate(bkp.a):
        B[n][j] = Fraction(params.s0 * aj)
    B[n][n] = Fraction(-params.s0 * bkp.b)
    last = B[d - 1]
    for j, cj in enumerate(params.C):
        last[j] = Fraction(params.s1 * cj)
        last[n + 1 + j] = Fraction(params.s1 * cj)
    last[n] = Fraction(params.s1 * params.delta * params.lam**n)
    last[d - 1] = Fraction(-params.s1 * params.gamma)

    det = math.prod(abs(B[i][i]) for i in range(d))
    expected = Fraction(params.s0 * params.s1 * bkp.b * params.gamma, params.delta**2)
    if det != expected:
        raise AssertionError(f"|det B0| = {det}, expected {expected}")

    f = [zero] * d
    for i, (ai, ui) in enumerate(zip(bkp.a, bkp.u)):
        f[i] = Fraction(ai * ui)
    return ReductionArtifacts(tuple(map(tuple, B)), params, tuple(f), bkp)


def reduce_bkp(bkp: BkpInstance, safety: int = 1) -> ReductionArtifacts:
    return build_b0(bkp, choose_params(bkp, safety))


def determinant(artifacts: ReductionArtifacts) -> Fraction:
    return math.prod(abs(artifacts.basis[i][i]) for i in range(artifacts.dim))


def lattice_vector(artifacts: ReductionArtifacts, z: Sequence[int]) -> LatticeVector:
    return LatticeVector(tuple(int(v) for v in z), forward_map(artifacts.basis, z))


def embed_solution(artifacts: ReductionArtifacts, x: Sequence[int]) -> LatticeVector:
    """The lattice vector ``(x/u, 0, 1 - x/u, 0)`` carrying solution ``x``."""
    bkp = artifacts.source
    if not verify_bkp(bkp, x):
        raise ValueError(f"{tuple(x)} is not a solution")
    n, prm = bkp.n, artifacts.params
    # the last row vanishes when z_last = (C.x + delta*lam^n + C.(u - x)) / gamma
    num = sum(c * ui for c, ui in zip(prm.C, bkp.u)) + prm.delta * prm.lam**n
    z_last, rem = divmod(num, prm.gamma)
    if rem:
        raise AssertionError("last coordinate of the embedded vector is not integral")
    z = (*x, 1, *(ui - xi for ui, xi in zip(bkp.u, x)), z_last)
    v = lattice_vector(artifacts, z)
    y = v.y
    if y[n] != 0 or y[-1] != 0:
        raise AssertionError("embedded vector has nonzero check coordinates")
    if v.norm(Norm.LINF) > 1 or v.norm(Norm.L1) != n:
        raise AssertionError("embedded vector has the wrong length")
    if artifacts.in_subspace(y):
        raise AssertionError("embedded vector lies in the avoided subspace")
    return v


def check_structural_conditions(artifacts: ReductionArtifacts, v: LatticeVector) -> tuple[bool, bool]:
    """``(check rows vanish, y_i + y_(n+1+i) == z_(n+1) for all i)``."""
    n = artifacts.source.n
    y, z = v.y, v.z
    rows_vanish = y[n] == 0 and y[2 * n + 1] == 0
    pairs = all(y[i] + y[n + 1 + i] == z[n] for i in range(n))
    return rows_vanish, pairs


def extract_solution(artifacts: ReductionArtifacts, v: LatticeVector) -> Optional[tuple[int, ...]]:
    """Read a knapsack solution off ``v`` (or off ``-v``); never returns a
    non-solution."""
    if artifacts.in_subspace(v.y):
        return None
    bkp = artifacts.source
    head = [ui * yi for ui, yi in zip(bkp.u, v.y)]
    if any(h.denominator != 1 for h in head):
        return None
    plus = tuple(int(h) for h in head)
    for cand in (plus, tuple(-h for h in plus)):
        if verify_bkp(bkp, cand):
            return cand
    return None
