import random
from fractions import Fraction as F

import pytest

from bipsap.acceptance import naive_scan, random_lower_triangular
from bipsap.model import BkpInstance, BudgetExceeded
from bipsap.reduction import reduce_bkp
from bipsap.sap import (
    Norm,
    SapQuery,
    count_near_minimal,
    enumerate_within,
    forward_map,
    lower_inverse,
    sap_shortest,
    solve_sap,
    vector_norm,
)

E1 = reduce_bkp(BkpInstance((2, 3), 5, (2, 1)))
SURF = reduce_bkp(BkpInstance((1, 1, 12), 14, (2, 2, 1)))
INFEASIBLE = reduce_bkp(BkpInstance((2, 4), 5, (3, 3)))


def test_forward_map_examples():
    assert forward_map(E1.basis, (0,) * 6) == (0,) * 6
    assert forward_map(E1.basis, (1, 0, 0, 0, 0, 0)) == (F(1, 2), 0, 10, 0, 0, 5)
    assert forward_map(E1.basis, (1, 1, 1, 1, 0, 2)) == (F(1, 2), 1, 0, F(1, 2), 0, 0)


def test_forward_map_length_check():
    with pytest.raises(ValueError):
        forward_map(E1.basis, (1, 2))


def test_lower_inverse_is_exact():
    inv = lower_inverse(E1.basis)
    d = len(inv)
    for i in range(d):
        for j in range(d):
            assert sum(E1.basis[i][k] * inv[k][j] for k in range(d)) == (1 if i == j else 0)


def test_query_validation():
    with pytest.raises(ValueError):
        SapQuery([[1, 1], [0, 1]], [1, 1])
    with pytest.raises(ValueError):
        SapQuery([[1, 0], [1, 0]], [1, 1])
    with pytest.raises(ValueError):
        SapQuery([[1]], [1], radius=-1)
    with pytest.raises(ValueError):
        SapQuery([[1]], [1, 2])


def test_small_instance_linf():
    vs = enumerate_within(E1.query(Norm.LINF, 1))
    assert [v.z for v in vs] == [(-1, -1, -1, -1, 0, -2), (1, 1, 1, 1, 0, 2)]
    assert vs[1].y == (F(1, 2), 1, 0, F(1, 2), 0, 0)


def test_zero_radius_is_empty():
    assert enumerate_within(E1.query(Norm.LINF, 0)) == []
    assert enumerate_within(SapQuery([[2, 0], [1, 3]], [1, 1], Norm.L1, 0)) == []


def test_infeasible_instance_is_empty():
    assert enumerate_within(INFEASIBLE.query(Norm.LINF, 1)) == []
    assert sap_shortest(INFEASIBLE.query(Norm.LINF, 1)) is None


def test_shortest_tie_break_and_l1():
    v = sap_shortest(E1.query(Norm.LINF, 1))
    assert v.z == (-1, -1, -1, -1, 0, -2) and v.norm(Norm.LINF) == 1
    assert sap_shortest(E1.query(Norm.L1, 2)).norm(Norm.L1) == 2


def test_near_minimal_counts():
    assert count_near_minimal(E1.query(Norm.LINF, 2), F(2, 5)) == (1, 2)
    assert count_near_minimal(SURF.query(Norm.LINF, 1), 0) == (1, 6)
    assert count_near_minimal(INFEASIBLE.query(Norm.LINF, 1), 1) == (None, 0)


def test_near_minimal_rejects_negative_epsilon():
    with pytest.raises(ValueError):
        count_near_minimal(E1.query(), -1)


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        solve_sap(SURF.query(Norm.L1, 3), node_budget=5)


def test_nodes_visited_deterministic():
    q = SURF.query(Norm.L1, 3)
    assert solve_sap(q).nodes_visited == solve_sap(q).nodes_visited


def test_shortest_monotone_in_radius():
    q = SapQuery([[F(3, 2), 0, 0], [1, F(-5, 3), 0], [2, -1, F(7, 2)]], [1, 0, 1], Norm.LINF)
    norms = []
    for r in (F(1), F(2), F(3), F(4), F(6)):
        v = sap_shortest(q.with_radius(r))
        norms.append(None if v is None else v.norm(Norm.LINF))
    found = [n for n in norms if n is not None]
    assert found == sorted(found, reverse=True)
    assert len(set(found[-3:])) == 1


@pytest.mark.parametrize("seed", range(5))
def test_matches_naive_scan_on_random_bases(seed):
    rng = random.Random(seed)
    checked = 0
    while checked < 12:
        d = rng.randint(1, 4)
        q = SapQuery(
            random_lower_triangular(rng, d),
            [rng.randint(-2, 2) for _ in range(d)],
            rng.choice((Norm.L1, Norm.LINF)),
            F(rng.randint(0, 8), rng.randint(1, 3)),
        )
        expected = naive_scan(q)
        if expected is None:
            continue
        got = enumerate_within(q)
        assert [v.z for v in got] == expected
        for v in got:
            assert v.y == forward_map(q.basis, v.z)
            assert vector_norm(v.y, q.norm) <= q.radius
        checked += 1
