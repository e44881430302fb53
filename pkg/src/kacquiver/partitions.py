"""Partitions and multipartitions."""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from sympy.utilities.iterables import partitions as _sympy_partitions

Partition = tuple[int, ...]
Multipartition = tuple[Partition, ...]


@lru_cache(maxsize=None)
def _partitions(m: int) -> tuple[Partition, ...]:
    out = []
    # sympy yields reverse-lexicographic order and reuses the dict it yields
    for p in _sympy_partitions(m):
        out.append(tuple(sorted(itertools.chain.from_iterable([k] * v for k, v in p.items()), reverse=True)))
    return tuple(out)


def partitions_of(m: int) -> Iterator[Partition]:
    if m < 0:
        raise ValueError("m must be nonnegative")
    return iter(_partitions(m))


def multipartitions_of(alpha: Sequence[int]) -> Iterator[Multipartition]:
    """Lazily yield every multipartition of weight ``alpha``."""
    return itertools.product(*(_partitions(a) for a in alpha))


def count_multipartitions(alpha: Sequence[int]) -> int:
    total = 1
    for a in alpha:
        total *= len(_partitions(a))
    return total


def row(lam: Multipartition, k: int) -> tuple[int, ...]:
    """The vector of k-th parts (1-based ``k``), zero-padded."""
    if k < 1:
        raise ValueError("rows are indexed from 1")
    return tuple(p[k - 1] if k <= len(p) else 0 for p in lam)


def length(lam: Multipartition) -> int:
    return max((len(p) for p in lam), default=0)


def weight(lam: Multipartition) -> tuple[int, ...]:
    return tuple(sum(p) for p in lam)
