"""Acceptance criteria, one marker label per criterion.

The terminal summary prints a PASS/FAIL line per criterion, followed by its checks.
"""
import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kacquiver.cli import main
from kacquiver.coeff import RationalFunction
from kacquiver.engine import (
    check_criterion,
    compute_series,
    criterion_verdict,
    indecomposables_from_a,
    m_from_r,
    product_over_indecomposables,
    r_series,
)
from kacquiver.oracle import FiniteField, burnside_sum, orientations, verify_m
from kacquiver.peterson import compare_with_hua, denominator_check, peterson_multiplicities
from kacquiver.quiver import Quiver, a2, a3, dim_vectors_up_to, example_quiver, kronecker
from kacquiver.series import (
    adams,
    big_psi,
    big_psi_inv,
    cap_exp,
    cap_log,
    delta_op,
    divisor_exponents,
    nabla_pair,
    pow_product,
    pow_struct,
    series_exp,
)
from tests.strategies import series, series_pair

QUIVERS = Path(__file__).resolve().parent.parent / "quivers"
q = RationalFunction.q()

# the 21 listed terms of r(0) for the example quiver, all below (3,3,3,3)
EXAMPLE_R0 = {
    (0, 0, 0, 0): 1,
    (0, 0, 0, 1): -1, (0, 0, 1, 0): -1, (0, 1, 0, 0): -1, (1, 0, 0, 0): -1,
    (0, 1, 0, 1): 1, (1, 0, 1, 0): 1,
    (0, 0, 1, 2): 1, (0, 0, 2, 1): 1, (1, 2, 0, 0): 1, (2, 1, 0, 0): 1,
    (0, 0, 2, 2): -1, (2, 2, 0, 0): -1,
    (0, 1, 3, 0): 1, (0, 3, 1, 0): 1, (1, 0, 0, 3): 1, (3, 0, 0, 1): 1,
    (0, 3, 1, 2): -1, (1, 2, 0, 3): -1, (2, 1, 3, 0): -1, (3, 0, 2, 1): -1,
}

# quiver set with boxes of height at most 6
QUIVER_SET = [
    (a2(), (3, 3)),
    (a3(), (2, 2, 2)),
    (kronecker(), (3, 3)),
    (kronecker(3), (3, 3)),
    (example_quiver(), (2, 2, 1, 1)),
    (example_quiver(), (2, 1, 2, 1)),
    (example_quiver(), (1, 2, 1, 2)),
]
SET_IDS = [f"{g.name}-{'x'.join(map(str, b))}" for g, b in QUIVER_SET]


def case_id(x):
    return getattr(x, "name", None) or "x".join(map(str, x))



def cli_json(capsys, *args):
    code = main([*args, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def fits(alpha, bound):
    return all(a <= b for a, b in zip(alpha, bound))


# -- 1 ---------------------------------------------------------------------------------


@pytest.mark.criterion("1", "example r(0) terms reproduced exactly via `series --what r0`")
@pytest.mark.parametrize("bound", [(3, 3, 3, 2), (2, 2, 2, 2), (3, 3, 1, 1), (1, 1, 1, 1), (0, 3, 3, 2)])
def test_c1_example_r0(capsys, bound):
    assert len(EXAMPLE_R0) == 21
    code, data = cli_json(
        capsys, "series", "--quiver", str(QUIVERS / "example.json"), "--bound", ",".join(map(str, bound)), "--what", "r0"
    )
    assert code == 0
    got = {tuple(t["alpha"]): t["coeff"] for t in data["terms"] if t["coeff"] != "0"}
    expected = {a: str(c) for a, c in EXAMPLE_R0.items() if fits(a, bound)}
    assert got == expected


# -- 2 ---------------------------------------------------------------------------------


@pytest.mark.criterion("2", "`criterion` on the example quiver up to (2,2,2,2) is PASS")
def test_c2_criterion_verdict(capsys):
    code, data = cli_json(capsys, "criterion", "--quiver", str(QUIVERS / "example.json"), "--bound", "2,2,2,2")
    assert code == 0
    assert data["verdict"] == "PASS"
    nonzero = {tuple(r["alpha"]) for r in data["records"] if r["r0"] != "0"}
    assert nonzero == {a for a in EXAMPLE_R0 if any(a) and fits(a, (2, 2, 2, 2))}


@pytest.mark.criterion("2", "T(alpha) = ht(alpha) on every listed nonzero term")
def test_c2_tits_equals_height():
    quiver = example_quiver()
    assert quiver.tits_form((0, 3, 1, 2)) == 6 == sum((0, 3, 1, 2))
    for alpha in EXAMPLE_R0:
        assert quiver.tits_form(alpha) == sum(alpha), alpha
    assert criterion_verdict(check_criterion(quiver, (3, 3, 3, 3)))


# -- 3 ---------------------------------------------------------------------------------


@pytest.mark.criterion("3", "m = Pow(r, q-1) = Exp(a), exactly, on the quiver set")
@pytest.mark.parametrize("quiver, bound", QUIVER_SET, ids=SET_IDS)
def test_c3_triple_agreement(quiver, bound):
    r = r_series(quiver, bound)
    m = m_from_r(r)
    a = (q - 1) * cap_log(r)
    assert m == pow_struct(r, q - 1)
    assert m == cap_exp(a)
    assert m == product_over_indecomposables(indecomposables_from_a(a))
    assert m.first_difference(cap_exp(a)) is None


# -- 4 ---------------------------------------------------------------------------------


def _integer_coefficients(c):
    return all(x.denominator == 1 for x in c.as_polynomial())


@pytest.mark.criterion("4", "every m_alpha and a_alpha is a polynomial with integer coefficients")
@pytest.mark.parametrize("quiver, bound", QUIVER_SET, ids=SET_IDS)
def test_c4_m_a_integer_polynomials(quiver, bound):
    ks = compute_series(quiver, bound, verify=False)
    for alpha, c in ks.m.items():
        assert _integer_coefficients(c), ("m", alpha, c)
    for alpha, c in ks.a.items():
        assert _integer_coefficients(c), ("a", alpha, c)


@pytest.mark.criterion("4", "every i_alpha is a polynomial with integer coefficients (as stated)")
@pytest.mark.parametrize("quiver, bound", QUIVER_SET, ids=SET_IDS)
def test_c4_i_integer_polynomials(quiver, bound):
    # i_alpha counts indecomposables over F_q, so it is integer-valued; whether its
    # coefficients are integers is checked here literally
    ks = compute_series(quiver, bound, verify=False)
    for alpha, c in ks.i.items():
        assert all(c(x).denominator == 1 for x in range(0, 8)), ("integer-valued", alpha, c)
        assert _integer_coefficients(c), ("i", alpha, str(c))


@pytest.mark.criterion("4", "a_alpha = 1 at real roots, 0 at non-roots for A2 and A3")
@pytest.mark.parametrize(
    "quiver, bound, roots",
    [
        (a2(), (3, 3), {(1, 0), (0, 1), (1, 1)}),
        (a3(), (2, 2, 2), {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 1, 1)}),
    ],
    ids=["A2", "A3"],
)
def test_c4_finite_type(quiver, bound, roots):
    ks = compute_series(quiver, bound)
    for alpha, c in ks.a.items():
        if any(alpha):
            assert c == (1 if alpha in roots else 0), alpha
    # positive roots of finite type are exactly the vectors with T = 1
    assert roots == {a for a in dim_vectors_up_to(bound) if quiver.tits_form(a) == 1}


@pytest.mark.criterion("4", "a_(1,1) = q + 1 for the Kronecker quiver")
def test_c4_kronecker():
    assert compute_series(kronecker(), (1, 1)).a[(1, 1)] == q + 1


# -- 5 ---------------------------------------------------------------------------------


@pytest.mark.criterion("5", "a_alpha(0) equals the Peterson multiplicity on the quiver set")
@pytest.mark.parametrize(
    "quiver, bound", QUIVER_SET + [(example_quiver(), (2, 2, 2, 2))], ids=SET_IDS + ["example-2x2x2x2"]
)
def test_c5_compare_with_hua(quiver, bound):
    report = compare_with_hua(quiver, bound)
    assert report.verdict, report.mismatches()
    assert len(report.records) == math.prod(b + 1 for b in bound) - 1


@pytest.mark.criterion("5", "denominator identity holds coefficientwise")
@pytest.mark.parametrize("quiver, bound", QUIVER_SET, ids=SET_IDS)
def test_c5_denominator_check(quiver, bound):
    result = denominator_check(quiver, peterson_multiplicities(quiver, bound))
    assert result.ok, result


@pytest.mark.criterion("5", "a single corrupted multiplicity flips the denominator check")
@pytest.mark.parametrize(
    "quiver, bound, alpha, value",
    [(a2(), (2, 2), (1, 0), 2), (kronecker(), (3, 3), (2, 2), 2), (example_quiver(), (2, 1, 1, 1), (1, 1, 0, 0), 0)],
    ids=["A2", "Kronecker", "example"],
)
def test_c5_fault_injection(quiver, bound, alpha, value):
    table = peterson_multiplicities(quiver, bound)
    assert denominator_check(quiver, table)
    assert table.mult[alpha] != value
    table.mult[alpha] = value
    assert not denominator_check(quiver, table)


# -- 6 ---------------------------------------------------------------------------------


@pytest.mark.criterion("6", "m_(1,1)(q) equals the Burnside count at q = 2, 3 for Kronecker and A2")
def test_c6_burnside_values():
    fields = [FiniteField(2), FiniteField(3)]
    kron = verify_m(kronecker(), (1, 1), fields)
    assert kron.ok
    assert [r.engine for r in kron.records] == [4, 5]
    line = verify_m(a2(), (1, 1), fields)
    assert line.ok
    assert [r.engine for r in line.records] == [2, 2]


@pytest.mark.criterion("6", "orientation sweep gives identical counts")
@pytest.mark.parametrize(
    "quiver, alpha", [(kronecker(), (1, 1)), (kronecker(), (2, 1)), (a3(), (1, 1, 1)), (example_quiver(), (1, 1, 1, 1))], ids=case_id
)
def test_c6_orientation_sweep(quiver, alpha):
    verdict = verify_m(quiver, alpha, [FiniteField(2), FiniteField(3)], sweep=True)
    assert verdict.ok
    for record in verdict.records:
        assert len(record.counts) == 2 ** sum(m for _, _, m in quiver.edges())


@pytest.mark.criterion("6", "Burnside sums are exactly divisible by the group order")
@pytest.mark.parametrize("quiver, alpha", [(kronecker(), (2, 2)), (a2(), (2, 2)), (kronecker(3), (1, 2))], ids=case_id)
def test_c6_divisibility(quiver, alpha):
    for p in (2, 3):
        for arrows in orientations(quiver):
            total, order = burnside_sum(quiver, alpha, FiniteField(p), arrows)
            assert total % order == 0


# -- 7 ---------------------------------------------------------------------------------

PROPS = settings(max_examples=200, deadline=None)


def _path_quiver(n):
    return Quiver.from_edges(n, [[i + 1, i + 2, (i % 2) + 1] for i in range(n - 1)])


@pytest.mark.criterion("7", "Psi^-1 o Psi = Id")
@PROPS
@given(series())
def test_c7_psi(f):
    assert big_psi_inv(big_psi(f)) == f


@pytest.mark.criterion("7", "Log o Exp = Id and Exp(f+g) = Exp(f) Exp(g)")
@PROPS
@given(series_pair())
def test_c7_exp_log(pair):
    f, g = pair
    assert cap_log(cap_exp(f)) == f
    assert cap_exp(f + g) == cap_exp(f) * cap_exp(g)


@pytest.mark.criterion("7", "Pow(f,1) = f, Pow(f,2) = f*f, pow_struct = pow_product")
@PROPS
@given(series(constant=1), st.sampled_from([2, q, q - 1, q**2 + 1]))
def test_c7_power_structure(f, g):
    assert pow_struct(f, 1) == f
    assert pow_struct(f, 2) == f * f
    assert pow_struct(f, g) == pow_product(f, divisor_exponents(g, max(f.box.height, 1)))


@pytest.mark.criterion("7", "psi_m o psi_n = psi_mn")
@PROPS
@given(series(), st.integers(1, 4), st.integers(1, 4))
def test_c7_adams(f, m, n):
    assert adams(adams(f, n), m) == adams(f, m * n)


@pytest.mark.criterion("7", "Delta exp(f) = exp(f) (Delta f + (grad f, grad f))")
@PROPS
@given(series())
def test_c7_laplacian(f):
    quiver = _path_quiver(len(f.bound))
    g = series_exp(f)
    assert delta_op(g, quiver) == g * (delta_op(f, quiver) + nabla_pair(f, f, quiver))
