"""Kac-Moody root multiplicities by the Peterson recursion.

With ``cbar = Psi(abar)`` the multiplicities satisfy, for every alpha,

    ((alpha, alpha) - 2 ht(alpha)) cbar_alpha
        = sum_{beta + gamma = alpha} (beta, gamma) cbar_beta cbar_gamma

which fixes ``cbar_alpha`` from strictly smaller exponents whenever the
left factor is nonzero.  Simple roots start the recursion with 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import divisors

from .errors import ConsistencyError, DegenerateRecursion
from .quiver import DimVector, Quiver
from .series import QQ, TruncatedSeries, box, cap_exp, d_rho, delta_op, nabla_pair


def _content(alpha: Sequence[int]) -> int:
    g = 0
    for x in alpha:
        g = gcd(g, x)
    return g


def _divided(alpha: Sequence[int], n: int) -> DimVector:
    return tuple(x // n for x in alpha)


@dataclass
class MultiplicityTable:
    bound: DimVector
    mult: dict[DimVector, Fraction] = field(default_factory=dict)
    cbar: dict[DimVector, Fraction] = field(default_factory=dict)

    def multiplicity_series(self) -> TruncatedSeries:
        return TruncatedSeries.from_dict(self.bound, self.mult, QQ)

    def cbar_series(self) -> TruncatedSeries:
        return TruncatedSeries.from_dict(self.bound, self.cbar, QQ)

    def rebuild_cbar(self) -> dict[DimVector, Fraction]:
        out = {}
        for alpha in self.mult:
            out[alpha] = sum(
                (Fraction(1, n) * self.mult.get(_divided(alpha, n), 0) for n in divisors(_content(alpha))),
                Fraction(0),
            )
        return out

    def positive_roots(self) -> list[DimVector]:
        return [a for a, m in self.mult.items() if m]

    def dump(self) -> str:
        from .series import format_alpha

        return "".join(f"{format_alpha(a)}\t{m}\n" for a, m in self.mult.items())


def peterson_multiplicities(quiver: Quiver, bound: Sequence[int]) -> MultiplicityTable:
    bound = tuple(bound)
    bx = box(bound)
    vec = bx.vectors
    cbar = [Fraction(0)] * bx.size
    mult = [Fraction(0)] * bx.size
    for k in bx.graded:
        alpha = vec[k]
        ht = bx.heights[k]
        if ht == 0:
            continue
        if ht == 1:
            mult[k] = cbar[k] = Fraction(1)
            continue
        num = Fraction(0)
        # (beta, gamma) is symmetric: fold the sum over beta < gamma in index order
        for i, j in bx.pairs[k]:
            if i and j and i <= j and cbar[i] and cbar[j]:
                term = quiver.bilinear(vec[i], vec[j]) * cbar[i] * cbar[j]
                num += term if i == j else 2 * term
        den = quiver.bilinear(alpha, alpha) - 2 * ht
        lower = sum(
            (Fraction(1, n) * mult[bx.index[_divided(alpha, n)]] for n in divisors(_content(alpha)) if n > 1),
            Fraction(0),
        )
        if den == 0:
            if num != 0:
                raise DegenerateRecursion(
                    f"(alpha, alpha) = 2 ht(alpha) but the convolution is {num} at alpha={alpha}"
                )
            mult[k] = Fraction(0)
            cbar[k] = lower
        else:
            cbar[k] = num / den
            mult[k] = cbar[k] - lower
        if mult[k].denominator != 1 or mult[k] < 0:
            raise ConsistencyError(f"multiplicity {mult[k]} is not a nonnegative integer", alpha)
    table = MultiplicityTable(bound)
    for k in bx.graded[1:]:
        table.mult[vec[k]] = mult[k]
        table.cbar[vec[k]] = cbar[k]
    return table


@dataclass
class CheckResult:
    ok: bool
    alpha: DimVector | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def denominator_check(quiver: Quiver, table: MultiplicityTable) -> CheckResult:
    """Check ``(Delta - 2 d_rho) Exp(-abar) = 0`` and the matching identity for ``cbar``."""
    rbar = cap_exp(-table.multiplicity_series())
    lhs = delta_op(rbar, quiver) - d_rho(rbar).scale(2)
    zero = TruncatedSeries.zero(table.bound, QQ)
    bad = lhs.first_difference(zero)
    if bad is not None:
        return CheckResult(False, bad, "(Delta - 2 d_rho) Exp(-abar) is nonzero")
    cbar = table.cbar_series()
    lhs = delta_op(cbar, quiver) - d_rho(cbar).scale(2)
    bad = lhs.first_difference(nabla_pair(cbar, cbar, quiver))
    if bad is not None:
        return CheckResult(False, bad, "(Delta - 2 d_rho) cbar != (grad cbar, grad cbar)")
    return CheckResult(True)


@dataclass(frozen=True)
class ComparisonRecord:
    alpha: DimVector
    a_at_zero: Fraction
    multiplicity: Fraction

    @property
    def equal(self) -> bool:
        return self.a_at_zero == self.multiplicity


@dataclass
class ComparisonReport:
    records: list[ComparisonRecord]

    @property
    def verdict(self) -> bool:
        return all(r.equal for r in self.records)

    def mismatches(self) -> list[ComparisonRecord]:
        return [r for r in self.records if not r.equal]


def compare_with_hua(
    quiver: Quiver,
    bound: Sequence[int],
    a: TruncatedSeries | None = None,
    table: MultiplicityTable | None = None,
) -> ComparisonReport:
    """Compare ``a_alpha(0)`` from Hua's formula with Peterson multiplicities.

    A mismatch at an indivisible alpha is raised as a bug, since the
    equality is known there.
    """
    from .engine import compute_series

    bound = tuple(bound)
    if a is None:
        a = compute_series(quiver, bound).a
    if table is None:
        table = peterson_multiplicities(quiver, bound)
    a0 = a.evaluate_at_zero()
    records = []
    for alpha, value in a0.items():
        if not any(alpha):
            continue
        rec = ComparisonRecord(alpha, value, table.mult[alpha])
        if not rec.equal and _content(alpha) == 1:
            raise ConsistencyError(
                f"a_alpha(0) = {value} but mult = {rec.multiplicity} for an indivisible alpha", alpha
            )
        records.append(rec)
    return ComparisonReport(records)
