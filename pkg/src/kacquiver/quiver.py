"""Loop-free quivers: Cartan pairing, Tits form, dimension-vector boxes."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .errors import BadIndex, InputError, LoopEdge, NegativeMultiplicity

DimVector = tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    """Underlying multigraph of a quiver; ``b[i][j]`` counts edges i--j."""

    n: int
    b: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.b) != self.n or any(len(row) != self.n for row in self.b):
            raise InputError(f"edge matrix must be {self.n}x{self.n}")
        for i in range(self.n):
            if self.b[i][i]:
                raise LoopEdge(f"loop at vertex {i + 1}")
            for j in range(self.n):
                if self.b[i][j] < 0:
                    raise NegativeMultiplicity(f"negative multiplicity on edge ({i + 1},{j + 1})")
                if self.b[i][j] != self.b[j][i]:
                    raise InputError("edge matrix must be symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Sequence[int]], name: str = "") -> Quiver:
        """Build from 1-indexed ``(i, j, mult)`` triples; repeated pairs add up."""
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InputError(f"vertex count must be a positive integer, got {n!r}")
        b = [[0] * n for _ in range(n)]
        for edge in edges:
            if len(edge) == 2:
                i, j, mult = edge[0], edge[1], 1
            elif len(edge) == 3:
                i, j, mult = edge
            else:
                raise InputError(f"edge must be [i, j] or [i, j, mult], got {edge!r}")
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in (i, j, mult)):
                raise InputError(f"edge entries must be integers, got {edge!r}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise BadIndex(f"edge {edge!r} refers to a vertex outside 1..{n}")
            if i == j:
                raise LoopEdge(f"edge {edge!r} is a loop")
            if mult < 0:
                raise NegativeMultiplicity(f"edge {edge!r} has negative multiplicity")
            b[i - 1][j - 1] += mult
            b[j - 1][i - 1] += mult
        return cls(n, tuple(tuple(row) for row in b), name)

    def edges(self) -> list[tuple[int, int, int]]:
        """0-indexed ``(i, j, mult)`` with ``i < j`` and ``mult > 0``."""
        return [
            (i, j, self.b[i][j])
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.b[i][j]
        ]

    def cartan(self) -> list[list[int]]:
        return [
            [2 if i == j else -self.b[i][j] for j in range(self.n)] for i in range(self.n)
        ]

    def bilinear(self, a: Sequence[int], b: Sequence[int]) -> int:
        self._check(a)
        self._check(b)
        total = 2 * sum(x * y for x, y in zip(a, b))
        for i, j, m in self.edges():
            total -= m * (a[i] * b[j] + a[j] * b[i])
        return total

    def tits_form(self, a: Sequence[int]) -> int:
        self._check(a)
        return sum(x * x for x in a) - sum(m * a[i] * a[j] for i, j, m in self.edges())

    def _check(self, a: Sequence[int]) -> None:
        if len(a) != self.n:
            raise BadIndex(f"dimension vector {tuple(a)} has length {len(a)}, expected {self.n}")

    def permuted(self, perm: Sequence[int]) -> Quiver:
        """Relabel vertex ``perm[k]`` as ``k``."""
        b = tuple(tuple(self.b[perm[i]][perm[j]] for j in range(self.n)) for i in range(self.n))
        return Quiver(self.n, b, self.name)

    def to_document(self) -> dict:
        return {
            "vertices": self.n,
            "edges": [[i + 1, j + 1, m] for i, j, m in self.edges()],
        }


def height(a: Sequence[int]) -> int:
    return sum(a)


def bilinear(quiver: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    return quiver.bilinear(a, b)


def tits_form(quiver: Quiver, a: Sequence[int]) -> int:
    return quiver.tits_form(a)


def load_quiver(document) -> Quiver:
    """Load from a dict, a JSON string, or a path to a JSON file."""
    if isinstance(document, Path) or (
        isinstance(document, str) and not document.lstrip().startswith("{")
    ):
        path = Path(document)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read quiver file {path}: {exc}") from exc
        document = text
        name = path.stem
    else:
        name = ""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"quiver document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "vertices" not in document:
        raise InputError('quiver document must be an object with "vertices" and "edges"')
    return Quiver.from_edges(
        document["vertices"], document.get("edges", []), document.get("name", name)
    )


def dim_vectors_up_to(bound: Sequence[int]) -> Iterator[DimVector]:
    """All ``0 <= alpha <= bound``, by height and then lexicographically."""
    if any(x < 0 for x in bound):
        raise InputError(f"bound entries must be nonnegative, got {tuple(bound)}")
    vectors = itertools.product(*(range(x + 1) for x in bound))
    yield from sorted(vectors, key=lambda a: (sum(a), a))


def unit(n: int, i: int) -> DimVector:
    return tuple(1 if k == i else 0 for k in range(n))


# Quivers used throughout the tests and the acceptance suite.

def a2() -> Quiver:
    return Quiver.from_edges(2, [[1, 2, 1]], "A2")


def a3() -> Quiver:
    return Quiver.from_edges(3, [[1, 2, 1], [2, 3, 1]], "A3")


def kronecker(m: int = 2) -> Quiver:
    return Quiver.from_edges(2, [[1, 2, m]], "Kronecker" if m == 2 else f"{m}-Kronecker")


def example_quiver() -> Quiver:
    """The 4-cycle with single edges 1-2, 3-4 and double edges 1-4, 2-3."""
    return Quiver.from_edges(4, [[1, 2, 1], [3, 4, 1], [1, 4, 2], [2, 3, 2]], "example")
