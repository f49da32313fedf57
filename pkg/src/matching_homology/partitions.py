"""Integer partitions and the dimension formulas for S_n and GL(m) irreducibles.

A partition is a plain tuple of positive integers in weakly decreasing order;
the empty tuple is the partition of 0.  Collections of partitions are always
returned in reverse-lexicographic order, so ``(4)`` comes before ``(3, 1)``.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Sequence

Partition = tuple[int, ...]


def canonical(parts: Iterable[int]) -> Partition:
    """Sort ``parts`` decreasingly and drop zeros."""
    parts = [int(p) for p in parts]
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    return tuple(sorted((p for p in parts if p), reverse=True))


def is_partition(lam: Sequence[int]) -> bool:
    return all(isinstance(p, int) and p > 0 for p in lam) and all(
        lam[i] >= lam[i + 1] for i in range(len(lam) - 1)
    )


def rows(lam: Partition) -> int:
    return len(lam)


def sort_partitions(items: Iterable[Partition]) -> list[Partition]:
    """Distinct partitions in canonical (reverse-lexicographic) order."""
    return sorted(set(items), reverse=True)


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int, max_rows: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    if max_rows == 0:
        return ()
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first, max_rows - 1):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int, max_rows: int | None = None) -> list[Partition]:
    """All partitions of ``n`` (with at most ``max_rows`` parts), reverse-lex."""
    if n < 0:
        raise ValueError("n must be non-negative")
    cap = n if max_rows is None else max_rows
    return list(_partitions(n, n, cap))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def hook_lengths(lam: Partition) -> list[list[int]]:
    conj = conjugate(lam)
    return [[lam[i] - j + conj[j] - i - 1 for j in range(lam[i])] for i in range(len(lam))]


@lru_cache(maxsize=None)
def dim_sn(lam: Partition) -> int:
    """Dimension of the Specht module V^lam via the hook length formula."""
    n = sum(lam)
    return factorial(n) // prod(h for row in hook_lengths(lam) for h in row)


def dim_gl(lam: Partition, m: int) -> int:
    """Dimension of the Schur module S_lam(C^m) via the hook-content formula."""
    if m < 1:
        raise ValueError("m must be positive")
    if len(lam) > m:
        return 0
    num = 1
    den = 1
    for i, row in enumerate(hook_lengths(lam)):
        for j, h in enumerate(row):
            num *= m + j - i
            den *= h
    return num // den


def corners(lam: Partition) -> list[int]:
    """Row indices whose last box can be removed."""
    return [i for i in range(len(lam)) if i == len(lam) - 1 or lam[i] > lam[i + 1]]


def remove_box(lam: Partition) -> list[Partition]:
    out = []
    for i in corners(lam):
        mu = list(lam)
        mu[i] -= 1
        out.append(canonical(mu))
    return sort_partitions(out)


def add_box(lam: Partition) -> list[Partition]:
    out = []
    for i in range(len(lam) + 1):
        if i == 0 or lam[i - 1] > (lam[i] if i < len(lam) else 0):
            mu = list(lam) + [0]
            mu[i] += 1
            out.append(canonical(mu))
    return sort_partitions(out)


def add_horizontal_strips(lam: Partition, k: int) -> list[Partition]:
    """All mu containing lam with |mu/lam| = k and no two new boxes in a column."""
    if k < 0:
        raise ValueError("k must be non-negative")
    ext = list(lam) + [0]
    out: list[Partition] = []

    def rec(i: int, left: int, acc: list[int]) -> None:
        if i == len(ext):
            if left == 0:
                out.append(canonical(acc))
            return
        # row i may grow up to the old length of row i-1
        cap = left if i == 0 else min(left, ext[i - 1] - ext[i])
        for a in range(cap, -1, -1):
            rec(i + 1, left - a, acc + [ext[i] + a])

    rec(0, k, [])
    return sort_partitions(out)


def count_standard_tableaux(lam: Partition) -> int:
    """Number of standard Young tableaux, by recursion on removable corners.

    Independent of the hook length formula; used as its oracle.
    """

    @lru_cache(maxsize=None)
    def f(mu: Partition) -> int:
        if not mu:
            return 1
        return sum(f(nu) for nu in remove_box(mu))

    return f(tuple(lam))


def count_semistandard_tableaux(lam: Partition, m: int) -> int:
    """Number of SSYT of shape lam with entries in 1..m, by horizontal strips.

    Removing all boxes labelled m from a SSYT leaves a SSYT with entries < m,
    and those boxes form a horizontal strip.
    """

    @lru_cache(maxsize=None)
    def f(mu: Partition, top: int) -> int:
        if not mu:
            return 1
        if top == 0:
            return 0
        total = 0
        for k in range(0, mu[0] + 1):
            for nu in _strips_removed(mu, k):
                total += f(nu, top - 1)
        return total

    return f(tuple(lam), m)


def _strips_removed(mu: Partition, k: int) -> list[Partition]:
    """All nu inside mu with mu/nu a horizontal strip of size k."""
    out = []
    ext = list(mu)

    def rec(i: int, left: int, acc: list[int]) -> None:
        if i == len(ext):
            if left == 0:
                out.append(canonical(acc))
            return
        nxt = ext[i + 1] if i + 1 < len(ext) else 0
        for a in range(min(left, ext[i] - nxt), -1, -1):
            rec(i + 1, left - a, acc + [ext[i] - a])

    rec(0, k, [])
    return out


def to_json(lam: Partition) -> list[int]:
    return list(lam)


def from_json(data: Sequence[int]) -> Partition:
    lam = tuple(int(x) for x in data)
    if not is_partition(lam):
        raise ValueError(f"not a partition: {data}")
    return lam
