"""Brute-force isomorphism-class counts of quiver representations over F_p.

Burnside: the number of orbits of ``G = prod_i GL(alpha_i, F_p)`` on the
representation space is ``|G|^{-1} sum_g |Fix(g)|``.  For an arrow
``i -> j`` the fixed matrices form the kernel of ``M -> g_j M - M g_i``,
so ``|Fix(g)| = p^(sum of kernel dimensions)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, InputError
from .quiver import Quiver

DEFAULT_BUDGET = 10**7
SUPPORTED_FIELDS = (2, 3, 5)

Arrow = tuple[int, int]
Matrix = tuple[tuple[int, ...], ...]


class FiniteField:
    """Prime field F_p with explicit tables, checked exhaustively on construction."""

    def __init__(self, p: int):
        if p not in SUPPORTED_FIELDS:
            raise InputError(f"only q in {SUPPORTED_FIELDS} are supported, got {p}")
        self.q = p
        self.elements = tuple(range(p))
        self.add_table = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
        self.mul_table = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
        self.inverse = {a: pow(a, -1, p) for a in range(1, p)}
        self._verify_axioms()

    def _verify_axioms(self) -> None:
        E, add, mul = self.elements, self.add_table, self.mul_table
        for a, b, c in itertools.product(E, repeat=3):
            assert add[add[a][b]][c] == add[a][add[b][c]]
            assert mul[mul[a][b]][c] == mul[a][mul[b][c]]
            assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]
        for a, b in itertools.product(E, repeat=2):
            assert add[a][b] == add[b][a] and mul[a][b] == mul[b][a]
        for a in E:
            assert add[a][0] == a and mul[a][1] == a
            assert any(add[a][b] == 0 for b in E)
            if a:
                assert mul[a][self.inverse[a]] == 1

    def __repr__(self) -> str:
        return f"FiniteField({self.q})"


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def intertwiner_kernel_dim(g_src: Matrix, g_dst: Matrix, p: int) -> int:
    """``dim {M : g_dst M = M g_src}`` for ``M`` of shape ``len(g_dst) x len(g_src)``."""
    a, b = len(g_src), len(g_dst)
    if a == 0 or b == 0:
        return 0
    # unknown M[r][c] sits at column r*a + c; one equation per entry (r, c)
    rows = []
    for r in range(b):
        for c in range(a):
            eq = [0] * (a * b)
            for k in range(b):
                eq[k * a + c] += g_dst[r][k]
            for k in range(a):
                eq[r * a + k] -= g_src[k][c]
            rows.append([x % p for x in eq])
    return a * b - rank_mod_p(rows, p)


def gl_order(n: int, q: int) -> int:
    order = 1
    for k in range(n):
        order *= q**n - q**k
    return order


@lru_cache(maxsize=None)
def general_linear_group(n: int, p: int) -> tuple[Matrix, ...]:
    """All invertible ``n x n`` matrices over F_p, by rejection."""
    out = []
    for entries in itertools.product(range(p), repeat=n * n):
        m = tuple(tuple(entries[r * n:(r + 1) * n]) for r in range(n))
        if rank_mod_p([list(r) for r in m], p) == n:
            out.append(m)
    assert len(out) == gl_order(n, p)
    return tuple(out)


def default_orientation(quiver: Quiver) -> list[Arrow]:
    """One arrow ``i -> j`` (``i < j``) per edge, 0-indexed."""
    return [(i, j) for i, j, m in quiver.edges() for _ in range(m)]


def orientations(quiver: Quiver) -> Iterator[list[Arrow]]:
    """Every way of directing each individual edge."""
    base = default_orientation(quiver)
    for flips in itertools.product((False, True), repeat=len(base)):
        yield [(j, i) if f else (i, j) for (i, j), f in zip(base, flips)]


def burnside_sum(
    quiver: Quiver,
    alpha: Sequence[int],
    field: FiniteField,
    orientation: Sequence[Arrow] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> tuple[int, int]:
    """Return ``(sum_g |Fix(g)|, |G|)``."""
    alpha = tuple(alpha)
    if len(alpha) != quiver.n:
        raise InputError(f"dimension vector {alpha} does not fit a quiver on {quiver.n} vertices")
    q = field.q
    order = 1
    for a in alpha:
        order *= gl_order(a, q)
    if order > budget:
        raise BudgetExceeded(order, budget)
    arrows = list(default_orientation(quiver) if orientation is None else orientation)
    multiplicity: dict[Arrow, int] = {}
    for arrow in arrows:
        multiplicity[arrow] = multiplicity.get(arrow, 0) + 1
    groups = [general_linear_group(a, q) for a in alpha]
    total = 0
    for g in itertools.product(*groups):
        exponent = sum(
            m * intertwiner_kernel_dim(g[i], g[j], q) for (i, j), m in multiplicity.items()
        )
        total += q**exponent
    return total, order


def burnside_count(
    quiver: Quiver,
    alpha: Sequence[int],
    field: FiniteField,
    orientation: Sequence[Arrow] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Number of isomorphism classes of representations of dimension ``alpha``."""
    total, order = burnside_sum(quiver, alpha, field, orientation, budget)
    count, rem = divmod(total, order)
    if rem:
        raise AssertionError(f"Burnside sum {total} is not divisible by |G| = {order}")
    return count


@dataclass
class OracleRecord:
    q: int
    engine: int
    counts: dict[str, int]

    @property
    def match(self) -> bool:
        return all(c == self.engine for c in self.counts.values())


@dataclass
class OracleVerdict:
    alpha: tuple[int, ...]
    records: list[OracleRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.match for r in self.records)


def _orientation_label(arrows: Iterable[Arrow]) -> str:
    return ",".join(f"{i + 1}->{j + 1}" for i, j in arrows)


def verify_m(
    quiver: Quiver,
    alpha: Sequence[int],
    fields: Sequence[FiniteField],
    m_poly: Sequence[Fraction] | None = None,
    budget: int = DEFAULT_BUDGET,
    sweep: bool = False,
) -> OracleVerdict:
    """Compare ``m_alpha(q)`` with Burnside counts at each field size.

    Runs the default orientation and its full reversal, or every
    orientation when ``sweep`` is set.
    """
    alpha = tuple(alpha)
    if m_poly is None:
        from .engine import m_series

        m_poly = m_series(quiver, alpha)[alpha].as_polynomial()
    base = default_orientation(quiver)
    if sweep:
        choices = list(orientations(quiver))
    else:
        choices = [base, [(j, i) for i, j in base]]
    verdict = OracleVerdict(alpha)
    for f in fields:
        value = sum(Fraction(c) * f.q**e for e, c in enumerate(m_poly))
        assert value.denominator == 1
        counts = {}
        for arrows in choices:
            label = _orientation_label(arrows)
            if label not in counts:
                counts[label] = burnside_count(quiver, alpha, f, arrows, budget)
        verdict.records.append(OracleRecord(f.q, int(value), counts))
    return verdict
