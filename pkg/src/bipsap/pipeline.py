"""Solving, counting and optimizing through the lattice route, plus the
diagnostics that check the reduction's guarantees on concrete instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import BipInstance, BkpInstance, validate_instance, verify_bip, verify_bkp
from .preprocess import (
    Branch,
    TransformTrail,
    Verdict,
    aggregate,
    binary_search_optimize,
    enforce_small_coeffs,
    ensure_not_double_b,
    force_surface,
    positivize,
    pullback_count,
    pullback_solution,
    verdict_solution,
)
from .reduction import Params, ReductionArtifacts, extract_solution, reduce_bkp
from .sap import DEFAULT_NODE_BUDGET, LatticeVector, Norm, solve_sap


@dataclass
class RunStats:
    """Bookkeeping filled in by the pipeline when the caller passes one in."""

    nodes_visited: int = 0
    branches: int = 0
    params: list[Params] = field(default_factory=list)
    # vectors of norm <= 1 outside S, one entry per lattice built while counting
    short_vectors: list[int] = field(default_factory=list)
    probes: int = 0


class ReductionViolation(AssertionError):
    """A concrete instance contradicts a property the reduction guarantees."""


def _require_valid(inst) -> None:
    problems = validate_instance(inst)
    if problems:
        raise ValueError("; ".join(problems))


def _scan_radius(norm: Norm, n: int) -> Fraction:
    return Fraction(1) if Norm(norm) is Norm.LINF else Fraction(n)


def _first_extracting(art: ReductionArtifacts, vectors: list[LatticeVector], norm: Norm):
    # shortest first, ties by z; the lemmas say the shortest already extracts,
    # the scan past it only matters if they did not
    for v in sorted(vectors, key=lambda v: (v.norm(norm), v.z)):
        x = extract_solution(art, v)
        if x is not None:
            return x
    return None


def solve_bkp_via_sap(
    bkp: BkpInstance,
    norm: Norm = Norm.LINF,
    safety: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: Optional[RunStats] = None,
) -> Optional[tuple[int, ...]]:
    """A verified solution of ``bkp``, or None when no branch's lattice has
    a vector outside S within radius 1 (l_inf) or n (l_1)."""
    _require_valid(bkp)
    norm = Norm(norm)
    stats = stats if stats is not None else RunStats()
    branches = enforce_small_coeffs(bkp)
    stats.branches += len(branches)
    for br in branches:
        x = _solve_branch(br, norm, safety, node_budget, stats)
        if x is not None:
            if not verify_bkp(bkp, x):
                raise ReductionViolation(f"pulled-back assignment {x} does not solve {bkp}")
            return x
    return None


def _solve_branch(br: Branch, norm, safety, node_budget, stats) -> Optional[tuple[int, ...]]:
    if br.solution is not None:
        return pullback_solution(br.trail, br.solution)
    if br.instance is None:
        return None
    inst, trail = ensure_not_double_b(br.instance)
    art = reduce_bkp(inst, safety)
    stats.params.append(art.params)
    out = solve_sap(art.query(norm, _scan_radius(norm, inst.n)), node_budget)
    stats.nodes_visited += out.nodes_visited
    x = _first_extracting(art, out.all_within, norm)
    if x is None:
        return None
    return pullback_solution(br.trail.extend(trail), x)


def count_bkp_via_sap(
    bkp: BkpInstance,
    safety: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: Optional[RunStats] = None,
) -> int:
    """Number of box solutions, read off the l_inf radius-1 vectors of each
    branch's lattice after forcing solutions onto the box surface."""
    _require_valid(bkp)
    stats = stats if stats is not None else RunStats()
    branches = enforce_small_coeffs(bkp)
    stats.branches += len(branches)
    total = 0
    for br in branches:
        if br.solution is not None:
            total += 1
            continue
        if br.instance is None:
            continue
        inst, trail = force_surface(br.instance)
        art = reduce_bkp(inst, safety)
        stats.params.append(art.params)
        out = solve_sap(art.query(Norm.LINF, 1), node_budget)
        stats.nodes_visited += out.nodes_visited
        found = len(out.all_within)
        stats.short_vectors.append(found)
        if found % 2:
            raise ReductionViolation(f"odd number ({found}) of short vectors for {inst}")
        total += pullback_count(br.trail.extend(trail), found // 2)
    return total


# -- general systems ---------------------------------------------------------

def _to_knapsack(bip: BipInstance):
    single, agg_trail = aggregate(bip)
    kn, pos_trail = positivize(single.A[0], single.b[0], single.u)
    return single, agg_trail, kn, pos_trail


def solve_bip(
    bip: BipInstance,
    norm: Norm = Norm.LINF,
    safety: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: Optional[RunStats] = None,
) -> Optional[tuple[int, ...]]:
    _require_valid(bip)
    single, agg_trail, kn, pos_trail = _to_knapsack(bip)
    if kn is Verdict.INFEASIBLE:
        return None
    if kn is Verdict.ZERO:
        x = verdict_solution(pos_trail, bip.n)
    else:
        y = solve_bkp_via_sap(kn, norm, safety, node_budget, stats)
        if y is None:
            return None
        x = pullback_solution(pos_trail, y)
    x = pullback_solution(agg_trail, x)
    if not verify_bip(bip, x):
        raise ReductionViolation(f"pulled-back assignment {x} does not solve the system")
    return x


def count_bip(
    bip: BipInstance,
    safety: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: Optional[RunStats] = None,
) -> int:
    _require_valid(bip)
    _, _, kn, pos_trail = _to_knapsack(bip)
    if kn is Verdict.INFEASIBLE:
        return 0
    if kn is Verdict.ZERO:
        return pullback_count(pos_trail, 1)
    return pullback_count(pos_trail, count_bkp_via_sap(kn, safety, node_budget, stats))


def optimize_bip(
    bip: BipInstance,
    c: Sequence[int],
    norm: Norm = Norm.LINF,
    safety: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: Optional[RunStats] = None,
) -> Optional[tuple[tuple[int, ...], int]]:
    """Minimize ``c . x`` by bisection, one lattice solve per probe."""
    _require_valid(bip)
    stats = stats if stats is not None else RunStats()

    def probe(inst: BipInstance):
        stats.probes += 1
        return solve_bip(inst, norm, safety, node_budget, stats)

    return binary_search_optimize(bip, [int(v) for v in c], probe)


# -- diagnostics ---------------------------------------------------------------

def lattice_source(bkp: BkpInstance) -> Optional[BkpInstance]:
    """The residual knapsack that the lattice is built from, before the
    surface transform; None when every variable is fixed."""
    _require_valid(bkp)
    return enforce_small_coeffs(bkp)[-1].instance


@dataclass(frozen=True)
class LengthProfile:
    linf_min: Optional[Fraction]
    l1_min: Optional[Fraction]
    linf_source: Optional[BkpInstance]   # instance behind the l_inf scan
    l1_source: Optional[BkpInstance]     # instance behind the l_1 scan
    feasible: bool


def shortest_length_profile(
    bkp: BkpInstance, safety: int = 1, node_budget: int = DEFAULT_NODE_BUDGET
) -> LengthProfile:
    """Shortest l_inf norm (scan ceiling 1, surface-forced instance) and
    shortest l_1 norm (scan ceiling n, normalized instance) in L0 minus S.

    Both scans run on the residual branch of ``bkp``. Feasibility is read
    off the scans by extraction. When feasible, the l_inf value must be 1
    and the l_1 value must be the dimension of its source instance;
    otherwise :class:`ReductionViolation` is raised.
    """
    source = lattice_source(bkp)
    if source is None:
        return LengthProfile(None, None, None, None, False)
    surf, _ = force_surface(source)
    norm_inst, _ = ensure_not_double_b(source)
    feasible = False
    mins = []
    for inst, norm in ((surf, Norm.LINF), (norm_inst, Norm.L1)):
        art = reduce_bkp(inst, safety)
        out = solve_sap(art.query(norm, _scan_radius(norm, inst.n)), node_budget)
        mins.append(None if out.shortest is None else out.shortest.norm(norm))
        if any(extract_solution(art, v) is not None for v in out.all_within):
            feasible = True
    linf_min, l1_min = mins
    if feasible and linf_min != 1:
        raise ReductionViolation(f"shortest l_inf norm is {linf_min}, expected 1, for {surf}")
    if feasible and l1_min != norm_inst.n:
        raise ReductionViolation(f"shortest l_1 norm is {l1_min}, expected {norm_inst.n}, for {norm_inst}")
    return LengthProfile(linf_min, l1_min, surf, norm_inst, feasible)


def check_center_condition(bkp: BkpInstance, x: Sequence[int], epsilon) -> bool:
    """Whether every ``x_i / u_i`` lies in ``[eps/(1+eps), 1/(1+eps)]``."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if not verify_bkp(bkp, x):
        raise ValueError(f"{tuple(x)} is not a solution")
    lo, hi = epsilon / (1 + epsilon), 1 / (1 + epsilon)
    return all(lo <= Fraction(xi, ui) <= hi for xi, ui in zip(x, bkp.u))


@dataclass(frozen=True)
class GapCertificate:
    scan_radius: Fraction
    bound: Fraction                       # 1 + 1/u_max
    extracting: int
    non_extracting: int
    min_non_extracting: Optional[Fraction]  # None: nothing below scan_radius
    violations: tuple[LatticeVector, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.min_non_extracting is None:
            return f">= {self.scan_radius}"
        return str(self.min_non_extracting)


def sap_gap_certificate(
    bkp: BkpInstance,
    scan_radius,
    safety: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> GapCertificate:
    """Enumerate L0 minus S at l_inf radius ``scan_radius`` and split the
    vectors into those that carry a solution and those that do not. Any
    non-extracting vector shorter than ``1 + 1/u_max`` is a violation."""
    _require_valid(bkp)
    inst, _ = ensure_not_double_b(bkp)
    art = reduce_bkp(inst, safety)
    radius = Fraction(scan_radius)
    bound = 1 + Fraction(1, inst.u_max)
    extracting, others = 0, []
    for v in solve_sap(art.query(Norm.LINF, radius), node_budget).all_within:
        if extract_solution(art, v) is not None:
            extracting += 1
        else:
            others.append(v)
    norms = [v.norm(Norm.LINF) for v in others]
    violations = tuple(v for v, nv in zip(others, norms) if nv < bound)
    return GapCertificate(
        radius, bound, extracting, len(others), min(norms, default=None), violations
    )
