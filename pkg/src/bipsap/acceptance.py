"""Acceptance checks against the brute-force oracles.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order. The pytest suite and the ``selftest`` command both drive this
module, so the two cannot drift apart.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .diophantine import DioInstance, dio_lemma_failures
from .generate import bip_suite, bkp_suite, random_objective
from .model import BkpInstance, verify_bip, verify_bkp
from .oracle import oracle_count, oracle_optimize, oracle_solutions, oracle_solve
from .pipeline import (
    ReductionViolation,
    RunStats,
    count_bkp_via_sap,
    ensure_not_double_b,
    lattice_source,
    optimize_bip,
    sap_gap_certificate,
    shortest_length_profile,
    solve_bip,
    solve_bkp_via_sap,
)
from .reduction import determinant, embed_solution, extract_solution, reduce_bkp
from .sap import Norm, SapQuery, enumerate_within, forward_map, lower_inverse, vector_norm

SOLVE_SEED = 20240601
COUNT_SEED = 20240602
BIP_SEED = 20240603
BASIS_SEED = 20240604


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] criterion {self.number}: {self.title} ({self.detail}; {self.seconds:.1f}s)"


def solve_suite() -> list[BkpInstance]:
    return bkp_suite(SOLVE_SEED, 200)


def count_suite() -> list[BkpInstance]:
    return bkp_suite(COUNT_SEED, 100)


def _feasible(inst: BkpInstance) -> bool:
    return oracle_solve(inst.as_bip()) is not None


# -- individual criteria ----------------------------------------------------

def solve_agreement(safety: int = 1) -> tuple[bool, str, list]:
    """Feasibility from both norms versus the oracle; returns the per
    instance answers so runs at different safety factors can be compared."""
    bad, answers = [], []
    for inst in solve_suite():
        expected = _feasible(inst)
        row = []
        for norm in (Norm.LINF, Norm.L1):
            x = solve_bkp_via_sap(inst, norm, safety)
            row.append(x is not None)
            if (x is not None) != expected or (x is not None and not verify_bkp(inst, x)):
                bad.append((inst, norm.value, x))
        answers.append(tuple(row))
    return not bad, f"{200 - len({id(b[0]) for b in bad})}/200 agree, both norms", answers


def count_agreement(safety: int = 1) -> tuple[bool, str, list]:
    bad, answers = [], []
    for inst in count_suite():
        stats = RunStats()
        got = count_bkp_via_sap(inst, safety, stats=stats)
        answers.append(got)
        expected = oracle_count(inst.as_bip())
        if got != expected or not _pairs_match(inst, stats):
            bad.append((inst, got, expected, stats.short_vectors))
    return not bad, f"{100 - len(bad)}/100 counts equal the oracle, short vectors = 2 x count", answers


def _pairs_match(inst: BkpInstance, stats: RunStats) -> bool:
    # short vectors of the residual lattice are exactly twice its solutions
    source = lattice_source(inst)
    if source is None:
        return not stats.short_vectors
    (found,) = stats.short_vectors
    return found == 2 * oracle_count(source.as_bip())


def length_profiles(safety: int = 1) -> tuple[tuple[bool, str], tuple[bool, str], list]:
    """Criteria 3 and 4 share one pass over the suite."""
    bad3, bad4, answers = [], [], []
    feasible_count = 0
    for inst in solve_suite():
        source = lattice_source(inst)
        if source is None:
            answers.append(None)
            continue
        try:
            prof = shortest_length_profile(inst, safety)
        except ReductionViolation as exc:
            bad3.append((inst, str(exc)))
            answers.append("violation")
            continue
        answers.append((prof.linf_min, prof.l1_min))
        feasible = _feasible(source)
        feasible_count += feasible
        if (prof.l1_min == prof.l1_source.n) != feasible or prof.feasible != feasible:
            bad3.append((inst, prof))
        if feasible and prof.linf_min != 1:
            bad4.append((inst, prof))
    return (
        (not bad3, f"l1 minimum = n iff feasible on {len(answers) - len(bad3)}/{len(answers)}"),
        (not bad4, f"l_inf minimum = 1 on {feasible_count - len(bad4)}/{feasible_count} feasible"),
        answers,
    )


def bip_agreement(safety: int = 1) -> tuple[bool, str]:
    rng = random.Random(BIP_SEED + 1)
    bad, optimized = [], 0
    for inst in bip_suite(BIP_SEED, 100):
        c = random_objective(rng, inst.n)
        expected = oracle_solve(inst)
        x = solve_bip(inst, Norm.LINF, safety)
        if (x is None) != (expected is None) or (x is not None and not verify_bip(inst, x)):
            bad.append((inst, x))
            continue
        if expected is None:
            continue
        got = optimize_bip(inst, c, Norm.LINF, safety)
        optimized += 1
        if got is None or got[1] != oracle_optimize(inst, c)[1] or not verify_bip(inst, got[0]):
            bad.append((inst, c, got))
    return not bad, f"{100 - len(bad)}/100 agree; {optimized} optimizations match"


def gap_certificates(safety: int = 1) -> tuple[bool, str]:
    feasible = [inst for inst in solve_suite() if lattice_source(inst) is not None
                and _feasible(lattice_source(inst))][:30]
    bad = []
    for inst in feasible:
        source = lattice_source(inst)
        u_max = ensure_not_double_b(source)[0].u_max
        # strictly below 1 + 1/u_max
        radius = 1 + Fraction(1, u_max) - Fraction(1, 4 * u_max)
        cert = sap_gap_certificate(source, radius, safety)
        if cert.non_extracting or not cert.holds:
            bad.append((inst, cert))
    return not bad and len(feasible) == 30, f"{len(feasible) - len(bad)}/{len(feasible)} scans extract only"


def diophantine_grid() -> tuple[bool, str]:
    bad, solutions = [], 0
    for lam, n, t in itertools.product((10, 33), (2, 3), range(-2, 3)):
        inst = DioInstance(lam, n, t)
        failures = dio_lemma_failures(inst, 2 * lam)
        if failures:
            bad.append((inst, failures[:3]))
    return not bad, f"{20 - len(bad)}/20 parameter triples pass"


def naive_scan(q: SapQuery) -> Optional[list[tuple[int, ...]]]:
    """Every z inside the box ``|z| <= R * |row of B^-1|_1``, filtered; None
    when the box is too large to scan."""
    inv = lower_inverse(q.basis)
    bounds = [math.floor(q.radius * sum(abs(v) for v in row)) for row in inv]
    if math.prod(2 * b + 1 for b in bounds) > 20000:
        return None
    out = []
    for z in itertools.product(*(range(-b, b + 1) for b in bounds)):
        y = forward_map(q.basis, z)
        if vector_norm(y, q.norm) <= q.radius and sum(f * v for f, v in zip(q.subspace_functional, y)):
            out.append(z)
    return out


def random_lower_triangular(rng: random.Random, d: int) -> list[list[Fraction]]:
    def entry(i, j):
        if j > i:
            return Fraction(0)
        if j == i:
            return Fraction(rng.choice((-1, 1)) * rng.randint(1, 4), rng.randint(1, 3))
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))

    return [[entry(i, j) for j in range(d)] for i in range(d)]


def random_queries(seed: int, count: int) -> list[SapQuery]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(1, 4)
        B = random_lower_triangular(rng, d)
        f = [Fraction(rng.randint(-2, 2)) for _ in range(d)]
        q = SapQuery(B, f, rng.choice((Norm.L1, Norm.LINF)), Fraction(rng.randint(0, 8), rng.randint(1, 3)))
        if naive_scan(q) is not None:
            out.append(q)
    return out


def structural_exactness(safety: int = 1) -> tuple[bool, str]:
    bad = []
    bases = trips = 0
    for inst in solve_suite():
        source = lattice_source(inst)
        if source is None:
            continue
        norm_inst, _ = ensure_not_double_b(source)
        art = reduce_bkp(norm_inst, safety)
        prm = art.params
        bases += 1
        if determinant(art) != Fraction(prm.s0 * prm.s1 * norm_inst.b * prm.gamma, prm.delta**2):
            bad.append(("determinant", inst))
        for x in oracle_solutions(norm_inst.as_bip()):
            trips += 1
            if extract_solution(art, embed_solution(art, x)) != x:
                bad.append(("round trip", inst, x))
    mismatched = 0
    for q in random_queries(BASIS_SEED, 50):
        if [v.z for v in enumerate_within(q)] != naive_scan(q):
            mismatched += 1
    ok = not bad and mismatched == 0
    return ok, f"{bases} determinants, {trips} round trips, {50 - mismatched}/50 random bases match"


def safety_robustness() -> tuple[bool, str]:
    """Criteria 1 to 4 give identical answers at K = 1 and K = 4."""
    same = True
    passed = True
    for fn in (solve_agreement, count_agreement):
        ok1, _, a1 = fn(1)
        ok4, _, a4 = fn(4)
        passed &= ok1 and ok4
        same &= a1 == a4
    c3a, c4a, p1 = length_profiles(1)
    c3b, c4b, p4 = length_profiles(4)
    passed &= c3a[0] and c4a[0] and c3b[0] and c4b[0]
    same &= p1 == p4
    return passed and same, "answers identical at K=1 and K=4" if same else "answers differ between K=1 and K=4"


# -- driver -------------------------------------------------------------------

def _timed(number: int, title: str, fn: Callable[[], tuple]) -> CheckResult:
    start = time.perf_counter()
    try:
        out = fn()
        passed, detail = out[0], out[1]
    except Exception as exc:  # a crash is a failed criterion, reported as such
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(number, title, bool(passed), detail, time.perf_counter() - start)


def run_all(report: Optional[Callable[[str], None]] = None) -> list[CheckResult]:
    results: list[CheckResult] = []

    def add(res: CheckResult):
        results.append(res)
        if report:
            report(res.line())

    add(_timed(1, "lattice solve agrees with the oracle on 200 knapsacks", solve_agreement))
    add(_timed(2, "lattice count equals the oracle count on 100 knapsacks", count_agreement))
    start = time.perf_counter()
    try:
        c3, c4, _ = length_profiles()
    except Exception as exc:
        c3 = c4 = (False, f"raised {type(exc).__name__}: {exc}")
    spent = time.perf_counter() - start
    add(CheckResult(3, "shortest l1 norm is n exactly when feasible", c3[0], c3[1], spent))
    add(CheckResult(4, "shortest l_inf norm is 1 on feasible surface instances", c4[0], c4[1], 0.0))
    add(_timed(5, "general systems: feasibility and optimum match the oracle", bip_agreement))
    add(_timed(6, "vectors shorter than 1 + 1/u_max all carry solutions", gap_certificates))
    add(_timed(7, "large-component bound and parameterization on the grid", diophantine_grid))
    add(_timed(8, "determinant, embed/extract round trip, enumerator vs naive scan", structural_exactness))
    add(_timed(9, "answers do not depend on the safety factor", safety_robustness))
    return results
