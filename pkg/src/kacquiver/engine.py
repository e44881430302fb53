"""Generating functions r, m, a, i of a quiver and the r(0) criterion.

Everything is exact in Q(q).  The pipeline is

    r  = sum over multipartitions of r_lambda
    m  = prod_d psi_d(r)^{Phi_d}           (irreducible-polynomial product)
    a  = (q - 1) Log(r)                    (absolutely indecomposables)
    i  = indecomposables, from a by Moebius inversion over divisors of alpha

and every stage is cross-checked against an independent route before it
is handed out.  A failed check raises :class:`ConsistencyError`; all of
them are theorems, so a failure is a bug rather than a mathematical event.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

import flint
from sympy import divisors

from .coeff import LaurentPoly, RationalFunction, phi_m_poly
from .errors import ConsistencyError, NonIntegral, NotAPolynomial, PoleAtZero
from .partitions import Multipartition, length, multipartitions_of, row
from .quiver import DimVector, Quiver
from .series import (
    QQ_q,
    TruncatedSeries,
    cap_exp,
    cap_log,
    divisor_exponents,
    mobius,
    pow_product,
    pow_struct,
    series_exp,
)

Q_MINUS_ONE = RationalFunction.from_polys([-1, 1])


def worker_count() -> int:
    """Worker cap from ``KAC_THREADS`` (default 1, i.e. in-process)."""
    try:
        return max(1, int(os.environ.get("KAC_THREADS", "1")))
    except ValueError:
        return 1


# -- r ----------------------------------------------------------------------


def r_lambda(quiver: Quiver, lam: Multipartition) -> RationalFunction:
    """``prod_k q^{-T(lam_k)} / prod_i phi_{lam^i_k - lam^i_{k+1}}(q^{-1})``.

    Uses ``phi_m(q^-1) = (-1)^m q^{-m(m+1)/2} phi_m(q)`` so that only
    ordinary polynomials with constant term 1 end up in the denominator.
    """
    shift = 0
    sign = 1
    den = flint.fmpq_poly([1])
    for k in range(1, length(lam) + 1):
        cur, nxt = row(lam, k), row(lam, k + 1)
        shift -= quiver.tits_form(cur)
        for a, b in zip(cur, nxt):
            m = a - b
            if m:
                shift += m * (m + 1) // 2
                if m % 2:
                    sign = -sign
                den = den * phi_m_poly(m)
    return RationalFunction._normalize(shift, flint.fmpq_poly([sign]), den)


def r_alpha(quiver: Quiver, alpha: Sequence[int]) -> RationalFunction:
    acc = RationalFunction(0)
    for lam in multipartitions_of(alpha):
        acc = acc + r_lambda(quiver, lam)
    return acc


def _r_alpha_job(args):
    quiver, alpha = args
    return r_alpha(quiver, alpha)


def r_series(quiver: Quiver, bound: Sequence[int], workers: int | None = None) -> TruncatedSeries:
    bound = tuple(bound)
    out = TruncatedSeries.zero(bound, QQ_q)
    vectors = out.box.vectors
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(vectors) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_r_alpha_job, [(quiver, a) for a in vectors], chunksize=4))
    else:
        values = [r_alpha(quiver, a) for a in vectors]
    out.coeffs[:] = values
    return out


# -- Phi_d ------------------------------------------------------------------


@lru_cache(maxsize=None)
def phi_d_count(d: int) -> LaurentPoly:
    """Number of monic irreducibles of degree ``d`` over F_q, other than t."""
    if d < 1:
        raise ValueError("degree must be positive")
    total = LaurentPoly()
    for e in divisors(d):
        mu = mobius(d // e)
        if mu:
            total = total + LaurentPoly({e: mu, 0: -mu})
    result = total * Fraction(1, d)
    # integer-valued, not integer coefficients: Phi_2 = (q^2 - q)/2
    if any(result(x).denominator != 1 for x in range(d + 1)):
        raise NonIntegral(f"Moebius sum for d={d} is not divisible by {d}")
    return result


def irreducible_exponents(n_max: int) -> dict[int, RationalFunction]:
    return {d: phi_d_count(d).to_rational_function() for d in range(1, n_max + 1)}


# -- m, a, i ------------------------------------------------------------------


def is_integer_valued(coeffs: Sequence[Fraction]) -> bool:
    """A degree-n polynomial is integer-valued iff it is so at 0..n."""
    return all(
        sum(c * x**e for e, c in enumerate(coeffs)).denominator == 1
        for x in range(len(coeffs))
    )


def _assert_integral_polynomials(
    series: TruncatedSeries, label: str, integer_coefficients: bool = True
) -> None:
    for alpha, c in series.items():
        try:
            coeffs = c.as_polynomial()
        except NotAPolynomial as exc:
            raise ConsistencyError(f"{label}_alpha = {c} is not a polynomial", alpha) from exc
        if integer_coefficients:
            if any(x.denominator != 1 for x in coeffs):
                raise ConsistencyError(f"{label}_alpha = {c} has non-integer coefficients", alpha)
        elif not is_integer_valued(coeffs):
            raise ConsistencyError(f"{label}_alpha = {c} is not integer-valued", alpha)


def m_from_r(r: TruncatedSeries) -> TruncatedSeries:
    return pow_product(r, irreducible_exponents(max(r.box.height, 1)))


def m_series(quiver: Quiver, bound: Sequence[int], r: TruncatedSeries | None = None) -> TruncatedSeries:
    r = r_series(quiver, bound) if r is None else r
    m = m_from_r(r)
    _assert_integral_polynomials(m, "m")
    return m


def indecomposables_from_a(a: TruncatedSeries) -> TruncatedSeries:
    """``i_alpha = sum_{d | alpha} sum_{k | d} mu(k)/d * a_{alpha/d}(q^{d/k})``."""
    bx = a.box
    out = TruncatedSeries.zero(a.bound, a.ring)
    for idx, alpha in enumerate(bx.vectors):
        if idx == 0:
            continue
        g = 0
        for x in alpha:
            g = gcd(g, x)
        acc = a.ring.zero()
        for d in divisors(g):
            base = a[tuple(x // d for x in alpha)]
            if not base:
                continue
            for k in divisors(d):
                mu = mobius(k)
                if mu:
                    acc = acc + base.adams(d // k) * Fraction(mu, d)
        out.coeffs[idx] = acc
    return out


def product_over_indecomposables(i: TruncatedSeries) -> TruncatedSeries:
    """``prod_alpha (1 - x^alpha)^{-i_alpha}`` with scalar (non-Adams) exponents."""
    bx = i.box
    logsum = TruncatedSeries.zero(i.bound, i.ring)
    for idx, alpha in enumerate(bx.vectors):
        c = i.coeffs[idx]
        if idx == 0 or not c:
            continue
        k = 1
        while True:
            j = bx.index.get(tuple(k * x for x in alpha))
            if j is None:
                break
            logsum.coeffs[j] = logsum.coeffs[j] + c * Fraction(1, k)
            k += 1
    return series_exp(logsum)


@dataclass
class KacSeries:
    """r, m, a, i for one quiver and bound, cross-checked on construction."""

    quiver: Quiver
    bound: DimVector
    r: TruncatedSeries
    m: TruncatedSeries
    a: TruncatedSeries
    i: TruncatedSeries
    checks: dict[str, bool] = field(default_factory=dict)

    def get(self, what: str) -> TruncatedSeries:
        if what == "r0":
            return self.r.evaluate_at_zero()
        return getattr(self, what)


def compute_series(quiver: Quiver, bound: Sequence[int], verify: bool = True) -> KacSeries:
    """Run the full pipeline.

    With ``verify`` the following are asserted exactly: m, a and i are
    integer polynomials; ``m = Pow(r, q-1) = Exp(a)``; and
    ``m = prod (1 - x^alpha)^{-i_alpha}``.
    """
    bound = tuple(bound)
    r = r_series(quiver, bound)
    m = m_from_r(r)
    a = cap_log(r).scale(Q_MINUS_ONE)
    i = indecomposables_from_a(a)
    checks: dict[str, bool] = {}
    if verify:
        _assert_integral_polynomials(m, "m")
        _assert_integral_polynomials(a, "a")
        # i_alpha counts F_q-points, so it is integer-valued; coefficients can
        # be fractional, e.g. q + 1 + (q^2 - q)/2 for the Kronecker quiver at (2,2)
        _assert_integral_polynomials(i, "i", integer_coefficients=False)
        checks["polynomiality"] = True
        for other, label in (
            (pow_struct(r, Q_MINUS_ONE), "Pow(r, q-1)"),
            (cap_exp(a), "Exp(a)"),
            (product_over_indecomposables(i), "prod (1-x^alpha)^(-i_alpha)"),
        ):
            bad = m.first_difference(other)
            if bad is not None:
                raise ConsistencyError(f"m disagrees with {label}", bad)
        checks["triple_agreement"] = True
        checks["indecomposable_product"] = True
    return KacSeries(quiver, bound, r, m, a, i, checks)


def a_series(quiver: Quiver, bound: Sequence[int]) -> TruncatedSeries:
    return compute_series(quiver, bound).a


def i_series(quiver: Quiver, bound: Sequence[int]) -> TruncatedSeries:
    return compute_series(quiver, bound).i


def pow_generalized(r: TruncatedSeries, p_x: LaurentPoly) -> TruncatedSeries:
    """``Pow(r, p_X)``, checked against ``prod_d psi_d(r)^{Phi_d}``.

    ``Phi_d`` solve ``sum_{d|n} d Phi_d = psi_n(p_X)``.
    """
    g = p_x.to_rational_function()
    exponents = divisor_exponents(g, max(r.box.height, 1), r.ring)
    via_product = pow_product(r, exponents)
    via_struct = pow_struct(r, g)
    bad = via_product.first_difference(via_struct)
    if bad is not None:
        raise ConsistencyError(f"Pow(r, {p_x}) disagrees with the product formula", bad)
    return via_struct


# -- criterion -----------------------------------------------------------------


@dataclass(frozen=True)
class CriterionRecord:
    alpha: DimVector
    r_at_zero: Fraction
    tits: int
    ht: int

    @property
    def passes(self) -> bool:
        return self.r_at_zero == 0 or self.tits == self.ht


def criterion_records(quiver: Quiver, r: TruncatedSeries) -> list[CriterionRecord]:
    records = []
    for alpha, c in r.items():
        if not any(alpha):
            continue
        try:
            value = c.eval_at_zero()
        except PoleAtZero as exc:
            raise PoleAtZero(f"r_alpha has a pole at q=0 for alpha={alpha}: {exc}", alpha) from exc
        records.append(CriterionRecord(alpha, value, quiver.tits_form(alpha), sum(alpha)))
    return records


def check_criterion(quiver: Quiver, bound: Sequence[int]) -> list[CriterionRecord]:
    """Evaluate ``r_alpha(0)`` and compare ``T(alpha)`` with ``ht(alpha)`` for ``0 < alpha <= bound``."""
    return criterion_records(quiver, r_series(quiver, bound))


def criterion_verdict(records: Sequence[CriterionRecord]) -> bool:
    return all(rec.passes for rec in records)


def r_at_zero_support(quiver: Quiver, bound: Sequence[int]) -> dict[DimVector, Fraction]:
    r0 = r_series(quiver, bound).evaluate_at_zero()
    return {a: c for a, c in r0.items() if c != 0}
