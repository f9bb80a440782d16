from fractions import Fraction as F

import pytest

from bipsap.generate import bkp_suite
from bipsap.model import BipInstance, BkpInstance, verify_bkp
from bipsap.oracle import oracle_count, oracle_solve
from bipsap.pipeline import (
    RunStats,
    check_center_condition,
    count_bip,
    count_bkp_via_sap,
    lattice_source,
    optimize_bip,
    sap_gap_certificate,
    shortest_length_profile,
    solve_bip,
    solve_bkp_via_sap,
)
from bipsap.sap import Norm

E1 = BkpInstance((2, 3), 5, (2, 1))
PAIR = BkpInstance((1, 1), 2, (2, 2))
PARITY = BkpInstance((2, 4), 5, (3, 3))
SYS = BipInstance([[1, 1], [1, 2]], [3, 5], [3, 3])


@pytest.mark.parametrize("norm", list(Norm))
def test_solve_knapsack_examples(norm):
    assert solve_bkp_via_sap(E1, norm) == (1, 1)
    assert solve_bkp_via_sap(PARITY, norm) is None
    x = solve_bkp_via_sap(PAIR, norm)
    assert x in {(0, 2), (1, 1), (2, 0)}


def test_solve_uses_explicit_branch():
    stats = RunStats()
    assert solve_bkp_via_sap(BkpInstance((3, 8), 8, (2, 1)), stats=stats) == (0, 1)
    assert stats.branches == 2


def test_solve_rejects_invalid():
    with pytest.raises(ValueError):
        solve_bkp_via_sap(BkpInstance((0, 1), 1, (1, 1)))


def test_count_examples():
    stats = RunStats()
    assert count_bkp_via_sap(PAIR, stats=stats) == 3
    assert stats.short_vectors == [6]
    assert count_bkp_via_sap(E1) == 1
    assert count_bkp_via_sap(PARITY) == 0


def test_count_with_explicit_branch():
    inst = BkpInstance((2, 6, 4), 6, (3, 1, 1))
    assert count_bkp_via_sap(inst) == oracle_count(inst.as_bip()) == 3


def test_solve_system_examples():
    assert solve_bip(SYS) == (1, 2)
    assert solve_bip(BipInstance([[1]], [0], [5])) == (0,)
    assert solve_bip(BipInstance([[2, 4]], [5], [3, 3])) is None
    assert solve_bip(BipInstance([[1, 2]], [-1], [3, 3])) is None


def test_count_system():
    assert count_bip(BipInstance([[0, 2]], [2], [3, 1])) == 4
    assert count_bip(BipInstance([[1, -1]], [0], [2, 2])) == 3
    assert count_bip(BipInstance([[0, 0]], [0], [2, 1])) == 6
    assert count_bip(BipInstance([[1, 1]], [-1], [2, 1])) == 0


def test_optimize_examples():
    assert optimize_bip(SYS, (1, 1)) == ((1, 2), 3)
    assert optimize_bip(BipInstance([[1, 1]], [2], [2, 2]), (1, -1)) == ((0, 2), -2)
    assert optimize_bip(BipInstance([[2, 4]], [5], [3, 3]), (1, 1)) is None


def test_length_profile_examples():
    p = shortest_length_profile(E1)
    assert (p.linf_min, p.l1_min, p.l1_source.n) == (1, 2, 2)
    p = shortest_length_profile(PAIR)
    assert (p.linf_min, p.l1_min) == (1, 3)
    assert p.linf_source == p.l1_source == BkpInstance((1, 1, 12), 14, (2, 2, 1))
    p = shortest_length_profile(PARITY)
    assert (p.linf_min, p.l1_min, p.feasible) == (None, None, False)


def test_center_condition():
    assert check_center_condition(BkpInstance((1, 1), 2, (3, 3)), (1, 1), F(1, 2))
    assert not check_center_condition(E1, (1, 1), F(1, 2))
    assert not check_center_condition(BkpInstance((1, 1), 2, (3, 3)), (0, 2), F(1, 3))
    with pytest.raises(ValueError):
        check_center_condition(E1, (2, 1), F(1, 2))
    with pytest.raises(ValueError):
        check_center_condition(E1, (1, 1), 0)


def test_gap_certificate_examples():
    cert = sap_gap_certificate(E1, F(7, 5))
    assert cert.describe() == ">= 7/5" and cert.extracting == 2 and cert.holds
    cert = sap_gap_certificate(BkpInstance((1,), 1, (1,)), F(3, 2))
    assert cert.bound == 2 and cert.non_extracting == 0
    cert = sap_gap_certificate(BkpInstance((1,), 1, (1,)), F(5, 2))
    assert cert.holds and cert.min_non_extracting == 2
    cert = sap_gap_certificate(PARITY, 1)
    assert cert.extracting == 0 and cert.describe() == ">= 1"


def test_small_suite_against_oracle():
    for inst in bkp_suite(5, 25):
        expected = oracle_solve(inst.as_bip())
        for norm in Norm:
            x = solve_bkp_via_sap(inst, norm)
            assert (x is None) == (expected is None)
            assert x is None or verify_bkp(inst, x)
        assert count_bkp_via_sap(inst) == oracle_count(inst.as_bip())


def test_lattice_source():
    assert lattice_source(BkpInstance((9, 2), 7, (5, 5))) == BkpInstance((2,), 7, (5,))
    assert lattice_source(BkpInstance((9,), 7, (5,))) is None
