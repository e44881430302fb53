"""Exact arithmetic in Q(q).

``LaurentPoly`` is a sparse exponent -> Fraction map used for small
explicit polynomials (phi_m, the irreducible counts Phi_d, user exponents).
``RationalFunction`` is the workhorse coefficient type.  It is stored as
``q**shift * num / den`` with ``num`` and ``den`` FLINT ``fmpq_poly``
objects, coprime, neither divisible by ``q``, and ``den(0) == 1``.  That
normal form is unique, so equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

import flint

from .errors import DivisionByZero, NotAPolynomial, PoleAtZero

_ZERO_POLY = flint.fmpq_poly([])
_ONE_POLY = flint.fmpq_poly([1])


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _render_terms(terms: Iterable[tuple[int, Fraction]]) -> str:
    out = []
    for e, c in terms:
        if e == 0:
            mono = str(abs(c))
        else:
            power = "q" if e == 1 else f"q^{e}"
            mono = power if abs(c) == 1 else f"{abs(c)}*{power}"
        if not out:
            out.append(mono if c > 0 else f"-{mono}")
        else:
            out.append(("+ " if c > 0 else "- ") + mono)
    return " ".join(out) if out else "0"


class LaurentPoly:
    """Sparse Laurent polynomial in ``q`` with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self._terms: dict[int, Fraction] = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self._terms[int(e)] = c

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, offset: int = 0) -> LaurentPoly:
        return cls({offset + i: c for i, c in enumerate(coeffs)})

    @classmethod
    def q(cls) -> LaurentPoly:
        return cls({1: 1})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exponent(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_exponent(self) -> int:
        return max(self._terms) if self._terms else 0

    def __getitem__(self, e: int) -> Fraction:
        return self._terms.get(e, Fraction(0))

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Rational)):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        result = LaurentPoly({0: 1})
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def adams(self, d: int) -> LaurentPoly:
        """Substitute ``q -> q**d`` (``d`` may be negative for ``q -> q**-1``)."""
        return LaurentPoly({d * e: c for e, c in self._terms.items()})

    def __call__(self, x):
        return sum((c * Fraction(x) ** e for e, c in self._terms.items()), Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def to_rational_function(self) -> RationalFunction:
        return RationalFunction.from_laurent(self)

    def __str__(self) -> str:
        return _render_terms(sorted(self._terms.items()))

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


@lru_cache(maxsize=None)
def phi_m(m: int) -> LaurentPoly:
    """Return ``prod_{i=1}^m (1 - q^i)``."""
    if m < 0:
        raise ValueError("phi_m needs m >= 0")
    result = LaurentPoly({0: 1})
    for i in range(1, m + 1):
        result = result * LaurentPoly({0: 1, i: -1})
    return result


@lru_cache(maxsize=None)
def phi_m_poly(m: int) -> flint.fmpq_poly:
    coeffs = [0] * (phi_m(m).max_exponent() + 1)
    for e, c in phi_m(m).terms.items():
        coeffs[e] = c
    return flint.fmpq_poly([_to_fmpq(c) for c in coeffs])


def _valuation(p: flint.fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    return 0


def _is_one(p: flint.fmpq_poly) -> bool:
    return p.degree() == 0 and p[0] == 1


class RationalFunction:
    """An element of Q(q) in reduced normal form.  Immutable."""

    __slots__ = ("_shift", "_num", "_den")

    def __init__(self, value=0):
        if isinstance(value, RationalFunction):
            self._shift, self._num, self._den = value._shift, value._num, value._den
            return
        if isinstance(value, LaurentPoly):
            other = RationalFunction.from_laurent(value)
            self._shift, self._num, self._den = other._shift, other._num, other._den
            return
        c = _to_fmpq(value)
        self._shift = 0
        self._num = flint.fmpq_poly([c]) if c != 0 else _ZERO_POLY
        self._den = _ONE_POLY

    @classmethod
    def _raw(cls, shift: int, num: flint.fmpq_poly, den: flint.fmpq_poly) -> RationalFunction:
        # caller guarantees normal form
        self = object.__new__(cls)
        self._shift, self._num, self._den = shift, num, den
        return self

    @classmethod
    def _normalize(cls, shift: int, num: flint.fmpq_poly, den: flint.fmpq_poly) -> RationalFunction:
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return cls._raw(0, _ZERO_POLY, _ONE_POLY)
        vn, vd = _valuation(num), _valuation(den)
        if vn:
            num = num.right_shift(vn)
        if vd:
            den = den.right_shift(vd)
        shift += vn - vd
        if den.degree() > 0:
            g = num.gcd(den)
            if not _is_one(g):
                num = num // g
                den = den // g
        c = den[0]
        if c != 1:
            num = num / c
            den = den / c
        return cls._raw(shift, num, den)

    @classmethod
    def from_polys(cls, num, den=None, shift: int = 0) -> RationalFunction:
        """Build ``q**shift * num / den`` from coefficient lists (ascending)."""
        n = flint.fmpq_poly([_to_fmpq(c) for c in num])
        d = _ONE_POLY if den is None else flint.fmpq_poly([_to_fmpq(c) for c in den])
        return cls._normalize(shift, n, d)

    @classmethod
    def from_laurent(cls, num: LaurentPoly, den: LaurentPoly | None = None) -> RationalFunction:
        def split(p: LaurentPoly):
            lo = p.min_exponent()
            coeffs = [0] * (p.max_exponent() - lo + 1)
            for e, c in p.terms.items():
                coeffs[e - lo] = c
            return lo, flint.fmpq_poly([_to_fmpq(c) for c in coeffs])

        if num.is_zero():
            if den is not None and den.is_zero():
                raise DivisionByZero("zero denominator")
            return cls(0)
        lo_n, n = split(num)
        if den is None:
            return cls._normalize(lo_n, n, _ONE_POLY)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        lo_d, d = split(den)
        return cls._normalize(lo_n - lo_d, n, d)

    @classmethod
    def q(cls) -> RationalFunction:
        return cls._raw(1, _ONE_POLY, _ONE_POLY)

    @classmethod
    def monomial(cls, c, e: int) -> RationalFunction:
        c = _to_fmpq(c)
        if c == 0:
            return cls(0)
        return cls._raw(e, flint.fmpq_poly([c]), _ONE_POLY)

    # -- accessors -------------------------------------------------------

    @property
    def numerator(self) -> LaurentPoly:
        return LaurentPoly.from_coeffs(
            [_to_fraction(c) for c in self._num.coeffs()], offset=self._shift
        )

    @property
    def denominator(self) -> LaurentPoly:
        return LaurentPoly.from_coeffs([_to_fraction(c) for c in self._den.coeffs()])

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def __bool__(self) -> bool:
        return not self._num.is_zero()

    def is_constant(self) -> bool:
        return self._shift == 0 and self._num.degree() <= 0 and self._den.degree() == 0

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Rational, flint.fmpq)):
            return RationalFunction(other)
        if isinstance(other, LaurentPoly):
            return RationalFunction.from_laurent(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._num.is_zero():
            return self
        if self._num.is_zero():
            return other
        s = min(self._shift, other._shift)
        n1 = self._num.left_shift(self._shift - s) if self._shift > s else self._num
        n2 = other._num.left_shift(other._shift - s) if other._shift > s else other._num
        d1, d2 = self._den, other._den
        if d1 == d2:
            return RationalFunction._normalize(s, n1 + n2, d1)
        g = d1.gcd(d2)
        if _is_one(g):
            return RationalFunction._normalize(s, n1 * d2 + n2 * d1, d1 * d2)
        c1, c2 = d2 // g, d1 // g
        return RationalFunction._normalize(s, n1 * c1 + n2 * c2, d1 * c1)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction._raw(self._shift, -self._num, self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, flint.fmpq)):
            c = _to_fmpq(other)
            if c == 0 or self._num.is_zero():
                return RationalFunction(0)
            return RationalFunction._raw(self._shift, self._num * c, self._den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._num.is_zero() or other._num.is_zero():
            return RationalFunction(0)
        n1, d1, n2, d2 = self._num, self._den, other._num, other._den
        # cross-cancel; inputs are reduced so the product is reduced afterwards
        if d2.degree() > 0:
            g = n1.gcd(d2)
            if not _is_one(g):
                n1, d2 = n1 // g, d2 // g
        if d1.degree() > 0:
            g = n2.gcd(d1)
            if not _is_one(g):
                n2, d1 = n2 // g, d1 // g
        num, den = n1 * n2, d1 * d2
        c = den[0]
        if c != 1:
            num, den = num / c, den / c
        return RationalFunction._raw(self._shift + other._shift, num, den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self._num.is_zero():
            raise DivisionByZero("division by the zero rational function")
        c = self._num[0]
        return RationalFunction._raw(-self._shift, self._den / c, self._num / c)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, flint.fmpq)):
            c = _to_fmpq(other)
            if c == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / c)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return self.inverse() ** (-n)
        result = RationalFunction(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self._shift == other._shift
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self) -> int:
        return hash((self._shift, str(self._num), str(self._den)))

    def __reduce__(self):
        return (
            _rebuild,
            (
                self._shift,
                tuple((int(c.p), int(c.q)) for c in self._num.coeffs()),
                tuple((int(c.p), int(c.q)) for c in self._den.coeffs()),
            ),
        )

    # -- lambda-ring and evaluation -------------------------------------

    def adams(self, d: int) -> RationalFunction:
        """Adams operation: substitute ``q -> q**d``."""
        if d < 1:
            raise ValueError("Adams operations need d >= 1")
        if d == 1 or self._num.is_zero():
            return self
        return RationalFunction._raw(
            self._shift * d, _spread(self._num, d), _spread(self._den, d)
        )

    def eval_at_zero(self) -> Fraction:
        if self._num.is_zero():
            return Fraction(0)
        if self._shift < 0:
            raise PoleAtZero(f"{self} has a pole of order {-self._shift} at q=0")
        if self._shift > 0:
            return Fraction(0)
        return _to_fraction(self._num[0])

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        den = _to_fraction(self._den(_to_fmpq(x)))
        if den == 0:
            raise DivisionByZero(f"{self} has a pole at q={x}")
        if x == 0:
            return self.eval_at_zero()
        return _to_fraction(self._num(_to_fmpq(x))) * x**self._shift / den

    def as_polynomial(self) -> list[Fraction]:
        """Ascending coefficient list if this is a polynomial in ``q``."""
        if self._num.is_zero():
            return []
        if self._den.degree() > 0 or self._shift < 0:
            raise NotAPolynomial(f"{self} is not a polynomial in q")
        return [Fraction(0)] * self._shift + [_to_fraction(c) for c in self._num.coeffs()]

    def __str__(self) -> str:
        num = str(self.numerator)
        if _is_one(self._den):
            return num
        den = str(self.denominator)
        if len(self._num.coeffs()) - list(self._num.coeffs()).count(0) > 1:
            num = f"({num})"
        return f"{num} / ({den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _spread(p: flint.fmpq_poly, d: int) -> flint.fmpq_poly:
    coeffs = p.coeffs()
    out = [0] * (d * (len(coeffs) - 1) + 1)
    for i, c in enumerate(coeffs):
        out[d * i] = c
    return flint.fmpq_poly(out)


def _rebuild(shift, num, den) -> RationalFunction:
    return RationalFunction._raw(
        shift,
        flint.fmpq_poly([flint.fmpq(p, q) for p, q in num]),
        flint.fmpq_poly([flint.fmpq(p, q) for p, q in den]),
    )


def ratfn_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    try:
        return ops[op]()
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def adams_subst(f: RationalFunction, d: int) -> RationalFunction:
    return f.adams(d)


def eval_at_zero(f: RationalFunction) -> Fraction:
    return f.eval_at_zero()


def as_polynomial(f: RationalFunction) -> list[Fraction]:
    return f.as_polynomial()
