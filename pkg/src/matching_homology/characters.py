"""Symmetric group characters via the Murnaghan-Nakayama rule.

Class functions are dictionaries keyed by cycle type (a partition of ``n``).
All arithmetic is exact: characters are ints, inner products are Fractions.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .branching import VirtualRep
from .partitions import Partition, canonical, enumerate_partitions

CHARACTER_TABLE_CAP = 24


class NotAVirtualCharacter(ValueError):
    pass


@dataclass(frozen=True)
class ClassFunction:
    n: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        keys = set(self.values)
        expected = set(enumerate_partitions(self.n))
        if not keys <= expected:
            raise ValueError(f"keys are not cycle types of S_{self.n}")
        missing = expected - keys
        if missing:
            vals = dict(self.values)
            vals.update({t: 0 for t in missing})
            object.__setattr__(self, "values", vals)

    def __getitem__(self, t: Partition):
        return self.values[tuple(t)]


def class_size(t: Partition) -> int:
    n = sum(t)
    denom = 1
    for length, mult in Counter(t).items():
        denom *= length**mult * factorial(mult)
    return factorial(n) // denom


def _beta(lam: Partition, length: int) -> tuple[int, ...]:
    lam = list(lam) + [0] * (length - len(lam))
    return tuple(lam[i] + length - 1 - i for i in range(length))


def _from_beta(beta) -> Partition:
    b = sorted(beta, reverse=True)
    length = len(b)
    return canonical(b[i] - (length - 1 - i) for i in range(length))


def rim_hooks(lam: Partition, r: int) -> list[tuple[Partition, int]]:
    """Partitions left after removing a rim hook of size r, with leg lengths.

    Uses beta numbers: a rim hook of size r corresponds to moving a bead
    from position b to an empty position b - r; the leg length is the number
    of beads strictly between.
    """
    beta = _beta(lam, len(lam))
    occupied = set(beta)
    out = []
    for b in beta:
        if b - r >= 0 and (b - r) not in occupied:
            leg = sum(1 for c in beta if b - r < c < b)
            new = (occupied - {b}) | {b - r}
            out.append((_from_beta(new), leg))
    return out


@lru_cache(maxsize=None)
def _mn(lam: Partition, t: Partition) -> int:
    if not t:
        return 1
    r, rest = t[0], t[1:]
    return sum((-1) ** leg * _mn(mu, rest) for mu, leg in rim_hooks(lam, r))


def mn_character(lam: Partition, t: Partition) -> int:
    """chi^lam evaluated on the class of cycle type t."""
    lam, t = canonical(lam), canonical(t)
    if sum(lam) != sum(t):
        raise ValueError(f"size mismatch: |{lam}| != |{t}|")
    return _mn(lam, t)


_tables: dict[int, dict] = {}
_tables_lock = threading.Lock()


def character_table(n: int) -> dict[Partition, dict[Partition, int]]:
    """``table[lam][t]``; memoized for n up to ``CHARACTER_TABLE_CAP``."""
    table = _tables.get(n)
    if table is not None:
        return table
    parts = enumerate_partitions(n)
    table = {lam: {t: _mn(lam, t) for t in parts} for lam in parts}
    if n <= CHARACTER_TABLE_CAP:
        with _tables_lock:
            _tables.setdefault(n, table)
    return table


def character_of(x: VirtualRep) -> ClassFunction:
    table = character_table(x.n)
    parts = enumerate_partitions(x.n)
    return ClassFunction(x.n, {t: sum(c * table[lam][t] for lam, c in x.items()) for t in parts})


def inner_product(f: ClassFunction, g: ClassFunction) -> Fraction:
    if f.n != g.n:
        raise ValueError("class functions on different groups")
    total = sum(class_size(t) * Fraction(f[t]) * Fraction(g[t]) for t in f.values)
    return total / factorial(f.n)


def decompose(f: ClassFunction) -> VirtualRep:
    """Multiplicities <f, chi^lam>; raises if any is not an integer."""
    table = character_table(f.n)
    fact = factorial(f.n)
    weighted = {t: class_size(t) * Fraction(v) for t, v in f.values.items() if v}
    mults = {}
    for lam, row in table.items():
        s = sum((w * row[t] for t, w in weighted.items()), Fraction(0)) / fact
        if s.denominator != 1:
            raise NotAVirtualCharacter(f"multiplicity of {lam} is {s}")
        if s:
            mults[lam] = int(s)
    return VirtualRep(f.n, mults)


def cycle_type_representative(t: Partition) -> tuple[int, ...]:
    """Permutation of 0..n-1 (as an image tuple) whose cycles are consecutive runs."""
    perm = []
    start = 0
    for length in t:
        perm.extend(start + (i + 1) % length for i in range(length))
        start += length
    return tuple(perm)


def cycle_type(perm) -> Partition:
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if not seen[i]:
            j, c = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                c += 1
            lengths.append(c)
    return canonical(lengths)
