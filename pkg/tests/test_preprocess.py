import pytest

from bipsap.model import BipInstance, BkpInstance, verify_bkp
from bipsap.oracle import oracle_count, oracle_optimize, oracle_solutions
from bipsap.preprocess import (
    AppendForcedUnitVariable,
    DropZeroColumn,
    FlipColumn,
    TransformTrail,
    Verdict,
    aggregate,
    aggregation_multiplier,
    binary_search_optimize,
    append_forced_unit,
    enforce_small_coeffs,
    ensure_not_double_b,
    force_surface,
    objective_range,
    positivize,
    pullback_count,
    pullback_solution,
    verdict_solution,
)


def test_aggregate_two_rows():
    single, trail = aggregate(BipInstance([[1, 1], [1, 2]], [3, 5], [3, 3]))
    assert single.A == ((11, 21),) and single.b == (53,)
    assert trail.steps[0].multipliers == (10,)
    assert oracle_solutions(single) == [(1, 2)]


def test_aggregate_single_row_is_identity():
    bip = BipInstance([[2, 3]], [5], [2, 1])
    single, trail = aggregate(bip)
    assert single is bip and len(trail) == 0


def test_aggregate_identity_rows():
    single, trail = aggregate(BipInstance([[1, 0], [0, 1]], [1, 1], [1, 1]))
    assert trail.steps[0].multipliers == (3,)
    assert single.A == ((1, 3),) and single.b == (4,)
    assert oracle_solutions(single) == [(1, 1)]


def test_multiplier_dominates_residual():
    row, rhs, u = (3, -2, 5), 4, (2, 3, 1)
    M = aggregation_multiplier(row, rhs, u)
    import itertools

    worst = max(abs(sum(a * x for a, x in zip(row, p)) - rhs) for p in itertools.product(*(range(v + 1) for v in u)))
    assert M > worst


def test_positivize_flips_negative_column():
    kn, trail = positivize((-2, 3), 1, (2, 1))
    assert kn == BkpInstance((2, 3), 5, (2, 1))
    assert pullback_solution(trail, (1, 1)) == (1, 1)


def test_positivize_leaves_positive_equation():
    kn, trail = positivize((2, 3), 5, (2, 1))
    assert kn == BkpInstance((2, 3), 5, (2, 1)) and trail.steps == ()


def test_positivize_drops_zero_column():
    kn, trail = positivize((0, 2), 2, (3, 1))
    assert kn == BkpInstance((2,), 2, (1,))
    assert trail.steps == (DropZeroColumn(0, 4, 0),)
    assert pullback_count(trail, 1) == 4 == oracle_count(BipInstance([[0, 2]], [2], [3, 1]))
    assert pullback_solution(trail, (1,)) == (0, 1)


@pytest.mark.parametrize(
    "a, b, u, verdict",
    [((1, 2), -1, (1, 1), Verdict.INFEASIBLE), ((0, 0), 3, (1, 1), Verdict.INFEASIBLE), ((1, 2), 0, (1, 1), Verdict.ZERO), ((-1, 2), -1, (1, 1), Verdict.ZERO)],
)
def test_positivize_verdicts(a, b, u, verdict):
    kn, _ = positivize(a, b, u)
    assert kn is verdict


def test_zero_verdict_pulls_back_zero_assignment():
    kn, trail = positivize((0, 3, 0), 0, (2, 2, 1))
    assert kn is Verdict.ZERO
    assert verdict_solution(trail, 3) == (0, 0, 0)
    assert pullback_count(trail, 1) == 6


def test_small_coeffs_untouched():
    (br,) = enforce_small_coeffs(BkpInstance((2, 3), 5, (2, 1)))
    assert br.instance == BkpInstance((2, 3), 5, (2, 1))


def test_small_coeffs_equal_to_b():
    branches = enforce_small_coeffs(BkpInstance((3, 8), 8, (2, 1)))
    assert [b.solution for b in branches] == [(0, 1), None]
    assert branches[1].instance == BkpInstance((3,), 8, (2,))
    assert oracle_count(branches[1].instance.as_bip()) == 0
    assert pullback_solution(branches[0].trail, branches[0].solution) == (0, 1)


def test_small_coeffs_above_b():
    (br,) = enforce_small_coeffs(BkpInstance((9, 2), 7, (5, 5)))
    assert br.instance == BkpInstance((2,), 7, (5,))


def test_small_coeffs_everything_fixed():
    branches = enforce_small_coeffs(BkpInstance((9, 5), 5, (1, 1)))
    assert branches[0].solution == (0, 1)
    assert branches[-1].infeasible


def test_not_double_b_unchanged():
    inst = BkpInstance((2, 3), 5, (2, 1))
    out, trail = ensure_not_double_b(inst)
    assert out is inst and trail.steps == ()


@pytest.mark.parametrize(
    "inst, expected",
    [
        (BkpInstance((1, 1), 2, (2, 2)), BkpInstance((1, 1, 12), 14, (2, 2, 1))),
        (BkpInstance((1, 3), 2, (1, 1)), BkpInstance((1, 3, 6), 8, (1, 1, 1))),
    ],
)
def test_not_double_b_applies_transform(inst, expected):
    out, trail = ensure_not_double_b(inst)
    assert out == expected
    assert out.weighted_box_sum() != 2 * out.b
    assert all(a < out.b for a in out.a)
    assert all(x[-1] == 1 for x in oracle_solutions(out.as_bip()))
    assert oracle_count(out.as_bip()) == oracle_count(inst.as_bip())


def test_force_surface_always_appends_once():
    out, trail = force_surface(BkpInstance((2, 3), 5, (2, 1)))
    assert out == BkpInstance((2, 3, 30), 35, (2, 1, 1))
    assert trail.steps == (AppendForcedUnitVariable(2),)
    out2, trail2 = force_surface(BkpInstance((1, 1), 2, (2, 2)))
    assert out2.n == 3 and len(trail2) == 1


def test_forced_unit_refuses_unreachable_zero_variable():
    # with a coefficient above b the old solutions could reach b' without x_(n+1)
    with pytest.raises(AssertionError):
        append_forced_unit(BkpInstance((50,), 2, (1,)))


def test_pullback_examples():
    assert pullback_solution(TransformTrail((FlipColumn(0, 2),)), (1, 1)) == (1, 1)
    assert pullback_solution(TransformTrail((AppendForcedUnitVariable(2),)), (0, 2, 1)) == (0, 2)
    assert pullback_solution(TransformTrail((DropZeroColumn(0, 4, 0),)), (1,)) == (0, 1)


def test_pullback_rejects_non_solution():
    _, trail = ensure_not_double_b(BkpInstance((1, 1), 2, (2, 2)))
    with pytest.raises(ValueError):
        pullback_solution(trail, (0, 0, 0))


def test_pullback_count_examples():
    assert pullback_count(TransformTrail((AppendForcedUnitVariable(2),)), 3) == 3
    assert pullback_count(TransformTrail(), 7) == 7


def _oracle_probe(inst):
    sols = oracle_solutions(inst)
    return sols[0] if sols else None


def test_binary_search_matches_oracle():
    bip = BipInstance([[1, 1], [1, 2]], [3, 5], [3, 3])
    assert binary_search_optimize(bip, (1, 1), _oracle_probe) == ((1, 2), 3)
    pair = BipInstance([[1, 1]], [2], [2, 2])
    assert binary_search_optimize(pair, (1, -1), _oracle_probe) == ((0, 2), -2)


def test_constant_objective_needs_one_probe():
    calls = []

    def probe(inst):
        calls.append(inst.b[-1])
        return _oracle_probe(inst)

    x, value = binary_search_optimize(BipInstance([[1, 1]], [2], [2, 2]), (0, 0), probe)
    assert value == 0 and calls == [0] and verify_bkp(BkpInstance((1, 1), 2, (2, 2)), x)


def test_binary_search_infeasible():
    assert binary_search_optimize(BipInstance([[2, 4]], [5], [3, 3]), (1, 1), _oracle_probe) is None


def test_probe_count_is_logarithmic():
    calls = []
    bip = BipInstance([[1, 1, 1]], [3], [3, 3, 3])
    c = (4, -3, 2)

    def probe(inst):
        calls.append(1)
        return _oracle_probe(inst)

    result = binary_search_optimize(bip, c, probe)
    lo, hi = objective_range(c, bip.u)
    import math

    assert len(calls) <= math.ceil(math.log2(hi - lo + 1)) + 1
    assert result[1] == oracle_optimize(bip, c)[1]
