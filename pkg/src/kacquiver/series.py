"""Box-truncated multivariate power series over a lambda-ring of coefficients.

A series with bound ``B`` lives in ``R[[x_1..x_n]] / (x_i^(B_i+1))``.  The
discarded monomials form an ideal, so every ring identity holds exactly in
the quotient.  Coefficients are stored densely in mixed-radix order, which
is a linear extension of the componentwise order on exponents; recursions
that only look at smaller exponents can therefore run in index order.

Infinite sums over Adams operations (Psi, Exp, products over d) stop at
``d = ht(B)``: on a series without constant term ``psi_d`` only produces
monomials of height >= d, so later terms are zero in the quotient.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius as _sympy_mobius

from .coeff import RationalFunction
from .errors import BadConstantTerm, BoundMismatch, NonzeroConstantTerm
from .quiver import DimVector, Quiver


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    return int(_sympy_mobius(n))


# -- coefficient rings -------------------------------------------------------


class CoefficientRing:
    name = "abstract"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def coerce(self, c):
        raise NotImplementedError

    def adams(self, c, d: int):
        raise NotImplementedError

    def render(self, c) -> str:
        return str(c)

    def __repr__(self) -> str:
        return f"<{self.name}>"


class RationalRing(CoefficientRing):
    """Q with trivial Adams operations; used for series evaluated at q=0."""

    name = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, c):
        if isinstance(c, RationalFunction):
            if not c.is_constant():
                raise TypeError(f"{c} is not a rational constant")
            return c.eval_at_zero()
        return Fraction(c)

    def adams(self, c, d):
        return c


class RationalFunctionRing(CoefficientRing):
    """Q(q) with ``psi_d: q -> q^d``."""

    name = "QQ(q)"

    def zero(self):
        return RationalFunction(0)

    def one(self):
        return RationalFunction(1)

    def coerce(self, c):
        return c if isinstance(c, RationalFunction) else RationalFunction(c)

    def adams(self, c, d):
        return c.adams(d)


QQ = RationalRing()
QQ_q = RationalFunctionRing()


# -- box geometry ------------------------------------------------------------


class Box:
    """Index bookkeeping for all exponents ``0 <= alpha <= bound``."""

    def __init__(self, bound: DimVector):
        self.bound = bound
        self.vectors: list[DimVector] = list(itertools.product(*(range(b + 1) for b in bound)))
        self.size = len(self.vectors)
        self.index = {v: k for k, v in enumerate(self.vectors)}
        self.heights = [sum(v) for v in self.vectors]
        self.height = sum(bound)
        self.graded = sorted(range(self.size), key=lambda k: (self.heights[k], self.vectors[k]))

    @property
    def pairs(self) -> list[list[tuple[int, int]]]:
        """``pairs[k]`` lists ``(i, j)`` with ``vectors[i] + vectors[j] == vectors[k]``."""
        try:
            return self._pairs
        except AttributeError:
            pass
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.size)]
        for k, gamma in enumerate(self.vectors):
            for beta in itertools.product(*(range(g + 1) for g in gamma)):
                rest = tuple(g - b for g, b in zip(gamma, beta))
                out[k].append((self.index[beta], self.index[rest]))
        self._pairs = out
        return out

    def scaled(self, d: int) -> list[tuple[int, int]]:
        """``(i, k)`` with ``d * vectors[i] == vectors[k]``."""
        out = []
        for i, v in enumerate(self.vectors):
            w = tuple(d * x for x in v)
            k = self.index.get(w)
            if k is not None:
                out.append((i, k))
        return out


@lru_cache(maxsize=64)
def box(bound: DimVector) -> Box:
    return Box(tuple(bound))


# -- the series type ---------------------------------------------------------


class TruncatedSeries:
    """Immutable truncated series; treat ``coeffs`` as read-only."""

    __slots__ = ("bound", "ring", "coeffs", "_box")

    def __init__(self, bound: Sequence[int], ring: CoefficientRing, coeffs: list | None = None):
        self.bound = tuple(bound)
        self.ring = ring
        self._box = box(self.bound)
        if coeffs is None:
            coeffs = [ring.zero()] * self._box.size
        elif len(coeffs) != self._box.size:
            raise ValueError("coefficient list does not match the box")
        self.coeffs = coeffs

    # constructors

    @classmethod
    def zero(cls, bound, ring=QQ_q) -> TruncatedSeries:
        return cls(bound, ring)

    @classmethod
    def one(cls, bound, ring=QQ_q) -> TruncatedSeries:
        s = cls(bound, ring)
        s.coeffs[0] = ring.one()
        return s

    @classmethod
    def from_dict(cls, bound, terms: Mapping[Sequence[int], object], ring=QQ_q) -> TruncatedSeries:
        """Terms outside the box are dropped."""
        s = cls(bound, ring)
        for alpha, c in terms.items():
            k = s._box.index.get(tuple(alpha))
            if k is not None:
                s.coeffs[k] = s.coeffs[k] + ring.coerce(c)
        return s

    @classmethod
    def monomial(cls, bound, alpha, c=1, ring=QQ_q) -> TruncatedSeries:
        return cls.from_dict(bound, {tuple(alpha): c}, ring)

    # access

    def __getitem__(self, alpha: Sequence[int]):
        return self.coeffs[self._box.index[tuple(alpha)]]

    @property
    def box(self) -> Box:
        return self._box

    def constant_term(self):
        return self.coeffs[0]

    def items(self) -> Iterator[tuple[DimVector, object]]:
        """All ``(alpha, coeff)`` pairs in graded-lex order."""
        for k in self._box.graded:
            yield self._box.vectors[k], self.coeffs[k]

    def support(self) -> dict[DimVector, object]:
        return {a: c for a, c in self.items() if c != 0}

    def map(self, fn: Callable, ring: CoefficientRing | None = None) -> TruncatedSeries:
        ring = ring or self.ring
        return TruncatedSeries(self.bound, ring, [ring.coerce(fn(c)) for c in self.coeffs])

    def map_indexed(self, fn: Callable[[DimVector, object], object]) -> TruncatedSeries:
        return TruncatedSeries(
            self.bound,
            self.ring,
            [self.ring.coerce(fn(a, c)) for a, c in zip(self._box.vectors, self.coeffs)],
        )

    def evaluate_at_zero(self) -> TruncatedSeries:
        """Coefficientwise ``q = 0``, landing in the Q ring."""
        return TruncatedSeries(
            self.bound, QQ, [c.eval_at_zero() if isinstance(c, RationalFunction) else Fraction(c) for c in self.coeffs]
        )

    # arithmetic

    def _check(self, other: TruncatedSeries) -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.bound != self.bound:
            raise BoundMismatch(f"bounds {self.bound} and {other.bound} differ")
        if other.ring is not self.ring:
            raise BoundMismatch(f"coefficient rings {self.ring} and {other.ring} differ")

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries(self.bound, self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries(self.bound, self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.bound, self.ring, [-a for a in self.coeffs])

    def scale(self, c) -> TruncatedSeries:
        """Multiply every coefficient by a ring element or rational."""
        if not isinstance(c, (int, Fraction)):
            c = self.ring.coerce(c)
        return TruncatedSeries(self.bound, self.ring, [a * c for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.bound == other.bound
            and self.ring is other.ring
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    __hash__ = None

    def first_difference(self, other: TruncatedSeries) -> DimVector | None:
        """Graded-lex first exponent where the two series differ, or None."""
        self._check(other)
        for k in self._box.graded:
            if self.coeffs[k] != other.coeffs[k]:
                return self._box.vectors[k]
        return None

    def dump(self, nonzero_only: bool = False) -> str:
        """One ``alpha<TAB>coefficient`` line per exponent, graded-lex."""
        lines = []
        for alpha, c in self.items():
            if nonzero_only and c == 0:
                continue
            lines.append(f"{format_alpha(alpha)}\t{self.ring.render(c)}")
        return "\n".join(lines) + ("\n" if lines else "")

    def __repr__(self) -> str:
        terms = ", ".join(f"{format_alpha(a)}: {c}" for a, c in self.items() if c != 0)
        return f"TruncatedSeries(bound={self.bound}, ring={self.ring.name}, {{{terms}}})"


def format_alpha(alpha: Iterable[int]) -> str:
    return "(" + ",".join(str(x) for x in alpha) + ")"


# -- operations --------------------------------------------------------------


def _sum(terms, zero):
    acc = zero
    for t in terms:
        acc = acc + t
    return acc


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    f._check(g)
    zero = f.ring.zero()
    fc, gc = f.coeffs, g.coeffs
    out = []
    for plist in f.box.pairs:
        out.append(_sum((fc[i] * gc[j] for i, j in plist if fc[i] and gc[j]), zero))
    return TruncatedSeries(f.bound, f.ring, out)


def adams(f: TruncatedSeries, d: int) -> TruncatedSeries:
    """``psi_d``: coefficient Adams operation plus ``x^alpha -> x^(d alpha)``."""
    if d < 1:
        raise ValueError("Adams operations need d >= 1")
    if d == 1:
        return f
    out = TruncatedSeries(f.bound, f.ring)
    for i, k in f.box.scaled(d):
        c = f.coeffs[i]
        if c:
            out.coeffs[k] = f.ring.adams(c, d)
    return out


def _require_no_constant(f: TruncatedSeries) -> None:
    if f.constant_term() != 0:
        raise NonzeroConstantTerm(f"constant term is {f.constant_term()}, expected 0")


def _require_unit_constant(f: TruncatedSeries) -> None:
    if f.constant_term() != 1:
        raise BadConstantTerm(f"constant term is {f.constant_term()}, expected 1")


def _weighted_adams_sum(f: TruncatedSeries, weight: Callable[[int], Fraction]) -> TruncatedSeries:
    out = TruncatedSeries.zero(f.bound, f.ring)
    for n in range(1, max(f.box.height, 1) + 1):
        w = weight(n)
        if w:
            out = out + adams(f, n).scale(w)
    return out


def big_psi(f: TruncatedSeries) -> TruncatedSeries:
    """``sum_{n>=1} psi_n(f) / n``."""
    _require_no_constant(f)
    return _weighted_adams_sum(f, lambda n: Fraction(1, n))


def big_psi_inv(f: TruncatedSeries) -> TruncatedSeries:
    """``sum_{n>=1} mu(n) psi_n(f) / n``, the inverse of :func:`big_psi`."""
    _require_no_constant(f)
    return _weighted_adams_sum(f, lambda n: Fraction(mobius(n), n))


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    """Formal exponential of a series without constant term.

    Uses ``D exp(f) = exp(f) D f`` for the height derivation ``D``.
    """
    _require_no_constant(f)
    bx = f.box
    ht = bx.heights
    weighted = [c * ht[i] if c else c for i, c in enumerate(f.coeffs)]
    g = [f.ring.zero()] * bx.size
    g[0] = f.ring.one()
    zero = f.ring.zero()
    for k in range(1, bx.size):
        acc = _sum((weighted[i] * g[j] for i, j in bx.pairs[k] if i and weighted[i] and g[j]), zero)
        g[k] = acc * Fraction(1, ht[k]) if acc else acc
    return TruncatedSeries(f.bound, f.ring, g)


def series_log(g: TruncatedSeries) -> TruncatedSeries:
    """Formal logarithm of a series with constant term 1."""
    _require_unit_constant(g)
    bx = g.box
    ht = bx.heights
    gc = g.coeffs
    f = [g.ring.zero()] * bx.size
    weighted = [g.ring.zero()] * bx.size
    zero = g.ring.zero()
    for k in range(1, bx.size):
        acc = _sum(
            (weighted[i] * gc[j] for i, j in bx.pairs[k] if i and j and weighted[i] and gc[j]),
            zero,
        )
        f[k] = gc[k] - acc * Fraction(1, ht[k]) if acc else gc[k]
        weighted[k] = f[k] * ht[k] if f[k] else f[k]
    return TruncatedSeries(g.bound, g.ring, f)


def cap_exp(f: TruncatedSeries) -> TruncatedSeries:
    """Plethystic exponential ``exp(Psi(f))``."""
    return series_exp(big_psi(f))


def cap_log(g: TruncatedSeries) -> TruncatedSeries:
    """Plethystic logarithm ``Psi^{-1}(log g)``."""
    return big_psi_inv(series_log(g))


def pow_struct(f: TruncatedSeries, g) -> TruncatedSeries:
    """Power structure ``Exp(g Log f)``."""
    return cap_exp(cap_log(f).scale(g))


def scalar_pow(h: TruncatedSeries, c) -> TruncatedSeries:
    """``h^c := exp(c log h)`` with ``c`` a coefficient-ring element."""
    return series_exp(series_log(h).scale(c))


def pow_product(f: TruncatedSeries, exponents: Mapping[int, object]) -> TruncatedSeries:
    """``prod_{d>=1} psi_d(f)^{g_d}`` with ``g_d = exponents[d]`` (missing means 0)."""
    _require_unit_constant(f)
    result = TruncatedSeries.one(f.bound, f.ring)
    for d in range(1, max(f.box.height, 1) + 1):
        g_d = exponents.get(d, 0)
        if g_d == 0:
            continue
        result = result * scalar_pow(adams(f, d), g_d)
    return result


def divisor_exponents(g, n_max: int, ring: CoefficientRing = QQ_q) -> dict[int, object]:
    """Solve ``sum_{d|n} d g_d = psi_n(g)`` for ``d <= n_max`` by Moebius inversion."""
    g = ring.coerce(g)
    out = {}
    for d in range(1, n_max + 1):
        acc = ring.zero()
        for e in divisors(d):
            mu = mobius(d // e)
            if mu:
                acc = acc + ring.adams(g, e) * mu
        out[d] = acc * Fraction(1, d)
    return out


def delta_op(f: TruncatedSeries, quiver: Quiver) -> TruncatedSeries:
    """Laplacian: scale ``x^alpha`` by ``(alpha, alpha)``."""
    return f.map_indexed(lambda a, c: c * quiver.bilinear(a, a) if c else c)


def d_rho(f: TruncatedSeries) -> TruncatedSeries:
    """Pairing with rho: scale ``x^alpha`` by ``ht(alpha)``."""
    return f.map_indexed(lambda a, c: c * sum(a) if c else c)


def nabla_pair(f: TruncatedSeries, g: TruncatedSeries, quiver: Quiver) -> TruncatedSeries:
    """``(grad f, grad g) = sum (alpha, beta) f_alpha g_beta x^(alpha+beta)``."""
    f._check(g)
    bx = f.box
    vec = bx.vectors
    fc, gc = f.coeffs, g.coeffs
    zero = f.ring.zero()
    out = []
    for plist in bx.pairs:
        out.append(
            _sum(
                (
                    fc[i] * gc[j] * quiver.bilinear(vec[i], vec[j])
                    for i, j in plist
                    if i and j and fc[i] and gc[j]
                ),
                zero,
            )
        )
    return TruncatedSeries(f.bound, f.ring, out)
