"""Exact subspace-avoiding enumeration over lower-triangular rational bases.

A lattice vector is ``y = B z`` for an integer coefficient vector ``z``.
Because ``B`` is lower triangular, ``y_k`` depends only on ``z_1 .. z_k``,
so a depth-first search over ``z`` in index order can bound each
coordinate from the prefix alone.

The search runs in integer arithmetic. ``B`` and the radius are scaled by a
common denominator ``D``. A second prune uses the exact inverse ``B^-1``:
every later ``z_r`` is ``(B^-1 y)_r``, a known prefix sum plus a bounded
unknown tail, and the branch is cut when no integer fits in that window.
Both prunes are relaxations, so the enumeration stays complete.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .model import BudgetExceeded

DEFAULT_NODE_BUDGET = 10**8


class Norm(str, enum.Enum):
    L1 = "l1"
    LINF = "linf"


def vector_norm(y: Sequence[Fraction], norm: Norm) -> Fraction:
    if Norm(norm) is Norm.L1:
        return sum((abs(v) for v in y), Fraction(0))
    return max((abs(v) for v in y), default=Fraction(0))


@dataclass(frozen=True)
class LatticeVector:
    z: tuple[int, ...]
    y: tuple[Fraction, ...]

    def norm(self, norm: Norm) -> Fraction:
        return vector_norm(self.y, norm)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-v for v in self.z), tuple(-v for v in self.y))


def forward_map(basis: Sequence[Sequence[Fraction]], z: Sequence[int]) -> tuple[Fraction, ...]:
    if len(z) != len(basis):
        raise ValueError(f"coefficient vector has length {len(z)}, basis has {len(basis)} columns")
    return tuple(
        sum((Fraction(b) * zj for b, zj in zip(row, z) if b and zj), Fraction(0))
        for row in basis
    )


def lower_inverse(basis: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse of a lower-triangular matrix by forward substitution."""
    d = len(basis)
    inv = [[Fraction(0)] * d for _ in range(d)]
    for c in range(d):
        for i in range(c, d):
            acc = Fraction(1 if i == c else 0)
            for j in range(c, i):
                if basis[i][j]:
                    acc -= basis[i][j] * inv[j][c]
            inv[i][c] = acc / basis[i][i]
    return inv


@dataclass(frozen=True)
class SapQuery:
    """Find lattice vectors outside ``{y : f . y = 0}`` within ``radius``."""

    basis: tuple[tuple[Fraction, ...], ...]
    subspace_functional: tuple[Fraction, ...]
    norm: Norm = Norm.LINF
    radius: Fraction = Fraction(1)

    def __post_init__(self):
        basis = tuple(tuple(Fraction(v) for v in row) for row in self.basis)
        f = tuple(Fraction(v) for v in self.subspace_functional)
        d = len(basis)
        if d == 0 or any(len(row) != d for row in basis):
            raise ValueError("basis must be a non-empty square matrix")
        if len(f) != d:
            raise ValueError(f"functional has length {len(f)}, expected {d}")
        for i, row in enumerate(basis):
            if row[i] == 0:
                raise ValueError(f"diagonal entry {i} is zero")
            if any(row[j] for j in range(i + 1, d)):
                raise ValueError(f"row {i} has entries above the diagonal")
        radius = Fraction(self.radius)
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "subspace_functional", f)
        object.__setattr__(self, "norm", Norm(self.norm))
        object.__setattr__(self, "radius", radius)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def with_radius(self, radius) -> "SapQuery":
        return replace(self, radius=Fraction(radius))


@dataclass
class SapOutcome:
    shortest: Optional[LatticeVector]
    all_within: Optional[list[LatticeVector]]
    nodes_visited: int = 0


def _lcm_of_denominators(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


# Reachable-sum tables larger than this fall back to interval bounds.
_TABLE_LIMIT = 20000


@dataclass
class _Compiled:
    d: int
    scale: int                      # D: y' = D * y is integral
    B: list[list[int]]              # D * basis
    col_updates: list[list[tuple[int, int]]]   # k -> [(row, B'[row][k])]
    inv_scale: int                  # E * D
    q_updates: list[list[tuple[int, int]]]     # k -> [(row, E*Binv[row][k])]
    checks: list[list[tuple[int, int]]]        # k -> [(row, coefficient)]
    segments: list                  # k -> None or (coupling row r, interior order)
    functional: list[int]
    radius: int
    l1: bool

    @classmethod
    def build(cls, q: SapQuery) -> "_Compiled":
        d = q.dim
        D = math.lcm(_lcm_of_denominators(v for row in q.basis for v in row), q.radius.denominator)
        B = [[int(v * D) for v in row] for row in q.basis]
        R = int(q.radius * D)
        inv = lower_inverse(q.basis)
        E = _lcm_of_denominators(v for row in inv for v in row)
        EB = [[int(v * E) for v in row] for row in inv]
        ED = E * D
        l1 = q.norm is Norm.L1

        checks: list[list[tuple[int, int]]] = [[] for _ in range(d)]
        tracked = set()
        for k in range(d):
            for r in range(k + 1, d):
                tail = [abs(EB[r][j]) for j in range(k + 1, r + 1)]
                coef = max(tail) if l1 else sum(tail)
                # a window of width >= ED always holds a multiple of ED
                if 2 * coef * R < ED:
                    checks[k].append((r, coef if l1 else coef * R))
                    tracked.add(r)
        col_updates = [[(r, B[r][k]) for r in range(k + 1, d) if B[r][k]] for k in range(d)]
        q_updates = [[(r, EB[r][k]) for r in sorted(tracked) if r > k and EB[r][k]] for k in range(d)]
        fscale = _lcm_of_denominators(q.subspace_functional)
        f = [int(v * fscale) for v in q.subspace_functional]
        return cls(d, D, B, col_updates, ED, q_updates, checks, _segments(B), f, R, l1)


def _segments(B: list[list[int]]) -> list:
    """For each start index k, the first row r > k that mixes columns
    k..r-1. Rows k..r-1 then depend on the prefix and their own coordinate
    only, so coordinates k..r can be solved together as a bounded knapsack
    on row r."""
    d = len(B)
    out = []
    for k in range(d):
        seg = None
        for r in range(k + 1, d):
            if any(B[r][j] for j in range(k, r)):
                order = sorted(range(k, r), key=lambda j: (-abs(B[r][j]), j))
                seg = (r, order)
                break
        out.append(seg)
    return out


def _coord_range(p: int, bkk: int, beta: int) -> range:
    """Integers z with ``|p + bkk z| <= beta``."""
    if bkk < 0:
        bkk, p = -bkk, -p
    return range(-((beta + p) // bkk), (beta - p) // bkk + 1)


def _search(c: _Compiled, node_budget: int, visit) -> int:
    """Depth-first search; calls ``visit(z, y_scaled)`` on every vector
    within the radius and outside the subspace, in lexicographic order of
    ``z``. Returns nodes visited."""
    d, ED, l1, B = c.d, c.inv_scale, c.l1, c.B
    z = [0] * d
    ys = [0] * d
    P = [0] * d
    Q = [0] * d
    nodes = 0

    def tick(count=1):
        nonlocal nodes
        nodes += count
        if nodes > node_budget:
            raise BudgetExceeded(f"enumeration exceeded {node_budget} nodes")

    def assign(k, zk, yk):
        z[k] = zk
        ys[k] = yk
        for r, v in c.q_updates[k]:
            Q[r] += v * yk
        for r, v in c.col_updates[k]:
            P[r] += v * zk

    def unassign(k, zk, yk):
        for r, v in c.q_updates[k]:
            Q[r] -= v * yk
        for r, v in c.col_updates[k]:
            P[r] -= v * zk

    def lookahead(k, rest) -> bool:
        for r, coef in c.checks[k]:
            bound = coef * rest if l1 else coef
            qr = Q[r]
            if (qr + bound) // ED * ED < qr - bound:
                return False
        return True

    def leaf():
        if any(ys) and sum(fi * yi for fi, yi in zip(c.functional, ys) if fi):
            visit(z, ys)

    def rec(k: int, beta: int):
        seg = c.segments[k]
        if seg is not None:
            r, order = seg
            for zs, yvals, rest in _solve_segment(c, P, k, r, order, beta, tick):
                for j, (zj, yj) in enumerate(zip(zs, yvals), start=k):
                    assign(j, zj, yj)
                if r + 1 == d:
                    leaf()
                elif lookahead(r, rest):
                    rec(r + 1, rest)
                for j, (zj, yj) in enumerate(zip(zs, yvals), start=k):
                    unassign(j, zj, yj)
            return
        bkk, p = B[k][k], P[k]
        for zk in _coord_range(p, bkk, beta):
            tick()
            yk = p + bkk * zk
            rest = beta - abs(yk) if l1 else beta
            assign(k, zk, yk)
            if k + 1 == d:
                leaf()
            elif lookahead(k, rest):
                rec(k + 1, rest)
            unassign(k, zk, yk)

    rec(0, c.radius)
    return nodes


def _solve_segment(c: _Compiled, P, k, r, order, beta, tick):
    """All assignments of coordinates k..r meeting their own row bounds,
    sorted lexicographically. Yields ``(z_k..z_r, y'_k..y'_r, budget left)``.

    Interior coordinates are visited by decreasing weight in row r and cut
    when row r can no longer land within the budget of a multiple of its
    diagonal entry. The cut uses an exact table of reachable row-r sums
    (with their least l1 cost) when it is small, interval bounds otherwise.
    """
    B, l1 = c.B, c.l1
    G = abs(B[r][r])
    m = len(order)
    weights = [B[r][j] for j in order]
    ranges = [_coord_range(P[j], B[j][j], beta) for j in order]

    def cost(pos, zj):
        return abs(P[order[pos]] + B[order[pos]][order[pos]] * zj) if l1 else 0

    # reachable suffix sums -> least cost, built back to front
    tables = [None] * (m + 1)
    tables[m] = {0: 0}
    # distinct sums are multiples of the weights' gcd within the spread
    g = 0
    for w in weights:
        g = math.gcd(g, w)
    spread = sum(abs(w) * max(len(rg) - 1, 0) for w, rg in zip(weights, ranges))
    if g and spread // g + 1 > _TABLE_LIMIT:
        tables = None
    for pos in range(m - 1, -1, -1):
        if tables is None:
            break
        nxt = tables[pos + 1]
        cur: dict[int, int] = {}
        w = weights[pos]
        for zj in ranges[pos]:
            cz = cost(pos, zj)
            for s, cs in nxt.items():
                tot = cs + cz
                if tot > beta:
                    continue
                key = s + w * zj
                old = cur.get(key)
                if old is None or tot < old:
                    cur[key] = tot
        if len(cur) > _TABLE_LIMIT:
            tables = None
            break
        tables[pos] = cur
    if tables is not None:
        keys = [sorted(t) for t in tables]
    else:
        lo_sfx = [0] * (m + 1)
        hi_sfx = [0] * (m + 1)
        for pos in range(m - 1, -1, -1):
            rg, w = ranges[pos], weights[pos]
            if len(rg) == 0:
                return []
            ends = (w * rg[0], w * rg[-1])
            lo_sfx[pos] = lo_sfx[pos + 1] + min(ends)
            hi_sfx[pos] = hi_sfx[pos + 1] + max(ends)

    def feasible(pos, base, avail) -> bool:
        # is there a suffix sum s and integer t with |base + s - G t| <= avail - cost(s)?
        if avail < 0:
            return False
        if tables is None:
            lo = base + lo_sfx[pos] - avail
            hi = base + hi_sfx[pos] + avail
            return (hi // G) * G >= lo
        ks, table = keys[pos], tables[pos]
        if not ks:
            return False
        t_lo = -((-(base + ks[0] - avail)) // G)
        t_hi = (base + ks[-1] + avail) // G
        for t in range(t_lo, t_hi + 1):
            target = G * t - base
            i = bisect.bisect_left(ks, target - avail)
            while i < len(ks) and ks[i] <= target + avail:
                s = ks[i]
                if table[s] + abs(base + s - G * t) <= avail:
                    return True
                i += 1
        return False

    out = []
    zbuf = [0] * (r - k + 1)
    ybuf = [0] * (r - k + 1)

    def seg_rec(pos, S, used):
        avail = beta - used if l1 else beta
        if pos == m:
            base = P[r] + S
            for zr in _coord_range(base, B[r][r], avail):
                tick()
                yr = base + B[r][r] * zr
                zbuf[-1] = zr
                ybuf[-1] = yr
                left = avail - abs(yr) if l1 else beta
                out.append((tuple(zbuf), tuple(ybuf), left))
            return
        j = order[pos]
        bjj, pj, w = B[j][j], P[j], weights[pos]
        for zj in _coord_range(pj, bjj, avail):
            tick()
            yj = pj + bjj * zj
            u2 = used + abs(yj) if l1 else 0
            S2 = S + w * zj
            if feasible(pos + 1, P[r] + S2, beta - u2 if l1 else beta):
                zbuf[j - k] = zj
                ybuf[j - k] = yj
                seg_rec(pos + 1, S2, u2)

    if feasible(0, P[r], beta):
        seg_rec(0, 0, 0)
    out.sort(key=lambda item: item[0])
    return out


def solve_sap(q: SapQuery, node_budget: int = DEFAULT_NODE_BUDGET) -> SapOutcome:
    """Enumerate every vector of norm <= radius outside the subspace.

    The list comes back sorted lexicographically by ``z``, and ``shortest``
    is its first element of minimal norm.
    """
    c = _Compiled.build(q)
    found: list[LatticeVector] = []
    D = c.scale

    def visit(z, ys):
        found.append(LatticeVector(tuple(z), tuple(Fraction(v, D) for v in ys)))

    nodes = _search(c, node_budget, visit)
    shortest = None
    best = None
    for v in found:
        nv = v.norm(q.norm)
        if best is None or nv < best:
            shortest, best = v, nv
    return SapOutcome(shortest, found, nodes)


def enumerate_within(q: SapQuery, node_budget: int = DEFAULT_NODE_BUDGET) -> list[LatticeVector]:
    return solve_sap(q, node_budget).all_within


def sap_shortest(q: SapQuery, node_budget: int = DEFAULT_NODE_BUDGET) -> Optional[LatticeVector]:
    return solve_sap(q, node_budget).shortest


def count_near_minimal(
    q: SapQuery, epsilon, node_budget: int = DEFAULT_NODE_BUDGET
) -> tuple[Optional[Fraction], int]:
    """Shortest norm within the scan ceiling, and how many vectors outside
    the subspace lie within ``(1 + epsilon)`` times it."""
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    shortest = sap_shortest(q, node_budget)
    if shortest is None:
        return None, 0
    lam = shortest.norm(q.norm)
    return lam, len(enumerate_within(q.with_radius((1 + epsilon) * lam), node_budget))
