"""Virtual representations of symmetric groups and their branching arithmetic.

``VirtualRep`` is an immutable formal Z-combination of partitions of a fixed
``n``.  Restriction removes one box, induction against a trivial ``S_k``
factor adds a horizontal strip (Pieri), and ``truncate_rows`` keeps the
summands with at most ``k`` rows.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable, Iterator

from .partitions import (
    Partition,
    add_horizontal_strips,
    canonical,
    dim_gl,
    dim_sn,
    from_json,
    remove_box,
)


class VirtualRep(Mapping):
    """Formal sum ``sum mult * V^lam`` over partitions ``lam`` of ``n``."""

    __slots__ = ("n", "_mults", "_hash")

    def __init__(self, n: int, mults: Mapping[Partition, int] | Iterable[tuple[Partition, int]] = ()):
        items = mults.items() if isinstance(mults, Mapping) else mults
        acc: dict[Partition, int] = {}
        for lam, c in items:
            lam = canonical(lam)
            if sum(lam) != n:
                raise ValueError(f"{lam} is not a partition of {n}")
            acc[lam] = acc.get(lam, 0) + int(c)
        self.n = n
        self._mults = {lam: acc[lam] for lam in sorted(acc, reverse=True) if acc[lam]}
        self._hash = None

    @classmethod
    def of(cls, *parts: Partition) -> "VirtualRep":
        """Multiplicity-one sum of the given partitions (repeats add up)."""
        if not parts:
            raise ValueError("use VirtualRep(n) for the zero representation")
        n = sum(parts[0])
        return cls(n, [(p, 1) for p in parts])

    # Mapping protocol; absent partitions have multiplicity 0
    def __getitem__(self, lam: Partition) -> int:
        return self._mults[tuple(lam)]

    def get(self, lam, default=0):
        return self._mults.get(tuple(lam), default)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self._mults)

    def __len__(self) -> int:
        return len(self._mults)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VirtualRep):
            return NotImplemented
        if not self._mults and not other._mults:
            return True
        return self.n == other.n and self._mults == other._mults

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, tuple(self._mults.items())))
        return self._hash

    def _check(self, other: "VirtualRep") -> None:
        if self.n != other.n and self._mults and other._mults:
            raise ValueError(f"degree mismatch: S_{self.n} vs S_{other.n}")

    def __add__(self, other: "VirtualRep") -> "VirtualRep":
        self._check(other)
        n = self.n if self._mults else other.n
        return VirtualRep(n, list(self._mults.items()) + list(other._mults.items()))

    def __sub__(self, other: "VirtualRep") -> "VirtualRep":
        return self + (-other)

    def __neg__(self) -> "VirtualRep":
        return VirtualRep(self.n, {lam: -c for lam, c in self._mults.items()})

    def __mul__(self, k: int) -> "VirtualRep":
        return VirtualRep(self.n, {lam: k * c for lam, c in self._mults.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self._mults)

    def is_effective(self) -> bool:
        return all(c > 0 for c in self._mults.values())

    def le(self, other: "VirtualRep") -> bool:
        """Componentwise ``self <= other``."""
        self._check(other)
        keys = set(self) | set(other)
        return all(self.get(k) <= other.get(k) for k in keys)

    def max_rows(self) -> int:
        return max((len(lam) for lam in self), default=0)

    def total_multiplicity(self) -> int:
        return sum(self._mults.values())

    def __repr__(self) -> str:
        return f"VirtualRep({self.n}, {self._mults!r})"

    def __str__(self) -> str:
        if not self._mults:
            return "0"
        terms = []
        for lam, c in self._mults.items():
            body = "(" + ",".join(map(str, lam)) + ")"
            if c == 1:
                terms.append(body)
            elif c == -1:
                terms.append("-" + body)
            else:
                terms.append(f"{c}{body}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_records(self) -> list[dict]:
        return [{"partition": list(lam), "mult": c} for lam, c in self._mults.items()]

    @classmethod
    def from_records(cls, n: int, records: Iterable[dict]) -> "VirtualRep":
        return cls(n, [(from_json(r["partition"]), int(r["mult"])) for r in records])


def zero(n: int) -> VirtualRep:
    return VirtualRep(n)


def vr_add(a: VirtualRep, b: VirtualRep) -> VirtualRep:
    return a + b


def vr_sub(a: VirtualRep, b: VirtualRep) -> VirtualRep:
    return a - b


def restrict(x: VirtualRep) -> VirtualRep:
    """Branch from S_n to S_{n-1}."""
    if x.n == 0:
        raise ValueError("cannot restrict a representation of S_0")
    out: dict[Partition, int] = {}
    for lam, c in x.items():
        for mu in remove_box(lam):
            out[mu] = out.get(mu, 0) + c
    return VirtualRep(x.n - 1, out)


def induce_trivial_strip(x: VirtualRep, k: int) -> VirtualRep:
    """Ind from S_n x S_k to S_{n+k} of ``x`` tensor the trivial module."""
    out: dict[Partition, int] = {}
    for lam, c in x.items():
        for mu in add_horizontal_strips(lam, k):
            out[mu] = out.get(mu, 0) + c
    return VirtualRep(x.n + k, out)


def truncate_rows(x: VirtualRep, k: int) -> VirtualRep:
    """Summands of ``x`` with at most ``k`` rows."""
    return VirtualRep(x.n, {lam: c for lam, c in x.items() if len(lam) <= k})


def upper_rows(x: VirtualRep, k: int) -> VirtualRep:
    """Summands of ``x`` with more than ``k`` rows."""
    return x - truncate_rows(x, k)


def vr_dim_sn(x: VirtualRep) -> int:
    return sum(c * dim_sn(lam) for lam, c in x.items())


def vr_dim_gl(x: VirtualRep, m: int) -> int:
    return sum(c * dim_gl(lam, m) for lam, c in x.items())


def componentwise_min(a: VirtualRep, b: VirtualRep) -> VirtualRep:
    a._check(b)
    n = a.n if a else b.n
    return VirtualRep(n, {lam: min(a.get(lam), b.get(lam)) for lam in set(a) | set(b)})


def positive_part(x: VirtualRep) -> VirtualRep:
    return VirtualRep(x.n, {lam: c for lam, c in x.items() if c > 0})
