import itertools
from fractions import Fraction

import pytest

from kacquiver.errors import ConsistencyError
from kacquiver.peterson import (
    compare_with_hua,
    denominator_check,
    peterson_multiplicities,
)
from kacquiver.quiver import a2, a3, example_quiver, kronecker, unit

QUIVERS = [
    (a2(), (2, 2)),
    (a3(), (2, 2, 2)),
    (kronecker(), (3, 3)),
    (kronecker(3), (3, 3)),
    (example_quiver(), (2, 2, 2, 2)),
]
ids = [q.name for q, _ in QUIVERS]


def test_simple_roots():
    for quiver, bound in QUIVERS:
        table = peterson_multiplicities(quiver, bound)
        for i in range(quiver.n):
            assert table.mult[unit(quiver.n, i)] == 1


def test_a2_single_step():
    # (e1,e2) = -1 counted twice, cbar = 1 each, D = 2 - 4: abar = -2/-2
    assert peterson_multiplicities(a2(), (1, 1)).mult[(1, 1)] == 1


def test_kronecker_imaginary_roots():
    table = peterson_multiplicities(kronecker(), (3, 3))
    assert table.mult[(2, 2)] == 1
    assert table.mult[(3, 3)] == 1
    assert table.mult[(2, 0)] == 0


def test_three_kronecker_grows():
    # 3-Kronecker at (2,3): a_(2,3)(0) = 2 from Hua's formula
    table = peterson_multiplicities(kronecker(3), (3, 3))
    assert table.mult[(2, 3)] == 2
    assert table.mult[(3, 3)] == 3


@pytest.mark.parametrize("quiver, bound", QUIVERS, ids=ids)
def test_table_invariants(quiver, bound):
    table = peterson_multiplicities(quiver, bound)
    assert table.rebuild_cbar() == table.cbar
    for alpha, m in table.mult.items():
        assert m.denominator == 1 and m >= 0
        if m and sum(alpha) > 1:
            assert quiver.bilinear(alpha, alpha) < 2 * sum(alpha)


@pytest.mark.parametrize("quiver, bound", [(a2(), (3, 3)), (a3(), (2, 2, 2))], ids=["A2", "A3"])
def test_finite_type_multiplicities_are_zero_or_one(quiver, bound):
    assert set(peterson_multiplicities(quiver, bound).mult.values()) <= {0, 1}


def test_permutation_invariance():
    quiver = example_quiver()
    table = peterson_multiplicities(quiver, (2, 2, 2, 2))
    for perm in itertools.permutations(range(4)):
        relabelled = peterson_multiplicities(quiver.permuted(perm), (2, 2, 2, 2))
        for alpha, m in relabelled.mult.items():
            original = [0] * 4
            for k, v in enumerate(alpha):
                original[perm[k]] = v
            assert table.mult[tuple(original)] == m


@pytest.mark.parametrize(
    "quiver, bound", [(a2(), (2, 2)), (kronecker(), (3, 3)), (example_quiver(), (2, 2, 1, 1))], ids=["A2", "Kronecker", "example"]
)
def test_denominator_check_passes(quiver, bound):
    assert denominator_check(quiver, peterson_multiplicities(quiver, bound))


def test_denominator_check_detects_corruption():
    table = peterson_multiplicities(a2(), (2, 2))
    table.mult[(1, 0)] = Fraction(2)
    result = denominator_check(a2(), table)
    assert not result
    assert result.alpha is not None


def test_denominator_check_detects_cbar_corruption():
    table = peterson_multiplicities(kronecker(), (2, 2))
    table.cbar[(1, 1)] += 1
    assert not denominator_check(kronecker(), table)


@pytest.mark.parametrize("quiver, bound", QUIVERS, ids=ids)
def test_compare_with_hua(quiver, bound):
    report = compare_with_hua(quiver, bound)
    assert report.verdict
    assert report.mismatches() == []


def test_compare_a2_values():
    report = compare_with_hua(a2(), (2, 2))
    nonzero = {r.alpha for r in report.records if r.multiplicity}
    assert nonzero == {(1, 0), (0, 1), (1, 1)}


def test_compare_raises_on_indivisible_mismatch():
    table = peterson_multiplicities(kronecker(), (2, 2))
    table.mult[(1, 2)] = Fraction(5)
    with pytest.raises(ConsistencyError):
        compare_with_hua(kronecker(), (2, 2), table=table)


def test_compare_reports_divisible_mismatch():
    table = peterson_multiplicities(kronecker(), (2, 2))
    table.mult[(2, 2)] = Fraction(5)
    report = compare_with_hua(kronecker(), (2, 2), table=table)
    assert not report.verdict
    assert [r.alpha for r in report.mismatches()] == [(2, 2)]


def test_dump():
    assert peterson_multiplicities(a2(), (1, 1)).dump() == "(0,1)\t1\n(1,0)\t1\n(1,1)\t1\n"
