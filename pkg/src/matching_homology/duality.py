"""Canonical-module dualities for d = 3 in two and three variables.

With dim V = 2 the canonical module of the cubic Veronese ring is S_(5,5),
with dim V = 3 it is S_(9,9,9).  Through the KRW correspondence these give

    mult of lam in H_{p-1}(C_N) = mult of (5-l2, 5-l1)        in H_{1-p}(C_{10-N})
    mult of lam in H_{p-1}(C_N) = mult of (9-l3, 9-l2, 9-l1)  in H_{6-p}(C_{27-N})

for partitions with at most 2 (resp. 3) rows and first part at most 5
(resp. 9).  Partitions with at most 2 (3) rows and a longer first row never
occur, since the dual module is polynomial.

Degrees follow the syzygy convention: p is the syzygy index, the homology
degree is p - 1, and N = (p + q) d + b with 0 <= b < d.
"""

from __future__ import annotations

from typing import Mapping, NamedTuple

from .branching import VirtualRep
from .partitions import Partition, canonical, enumerate_partitions


class DualImage(NamedTuple):
    partition: Partition
    p: int
    N: int
    vacuous: bool

    @property
    def degree(self) -> int:
        return self.p - 1


class DualityDomainError(ValueError):
    pass


def pqb_to_degree(p: int, q: int, b: int, d: int = 3) -> tuple[int, int]:
    """(p, q, b) -> (N, homological degree)."""
    return (p + q) * d + b, p - 1


def degree_to_pqb(N: int, degree: int, d: int = 3) -> tuple[int, int, int]:
    """(N, homological degree) -> (p, q, b)."""
    p = degree + 1
    b = N % d
    return p, N // d - p, b


def _dual(lam: Partition, box: int, nrows: int, p: int, N: int, p_shift: int, n_total: int) -> DualImage:
    if len(lam) > nrows:
        raise DualityDomainError(f"{lam} has more than {nrows} rows")
    if lam and lam[0] > box:
        raise DualityDomainError(f"first row of {lam} exceeds {box}")
    padded = list(lam) + [0] * (nrows - len(lam))
    mu = canonical(box - x for x in reversed(padded))
    p2 = p_shift - p
    n2 = n_total - N
    # degree -1 with a tiny ground set is the void complex, whose H_{-1} is trivial
    vacuous = n2 < 0 or p2 - 1 < -1
    return DualImage(mu, p2, n2, vacuous)


def dual2(lam: Partition, p: int, N: int) -> DualImage:
    """lam in H_{p-1}(C^3_N), at most 2 rows -> partner in H_{1-p}(C^3_{10-N})."""
    return _dual(tuple(lam), 5, 2, p, N, 2, 10)


def dual3(lam: Partition, p: int, N: int) -> DualImage:
    """lam in H_{p-1}(C^3_N), at most 3 rows -> partner in H_{6-p}(C^3_{27-N})."""
    return _dual(tuple(lam), 9, 3, p, N, 7, 27)


Tables = Mapping[int, Mapping[int, VirtualRep]]

DUALITIES = {
    2: (dual2, 5, 10),
    3: (dual3, 9, 27),
}


def predicted_low_rows(tables: Tables, N: int, rows: int) -> dict[int, VirtualRep] | None:
    """The at-most-``rows`` part of every H_i(C^3_N) forced by duality.

    Returns None when the partner ground set 27 - N (or 10 - N) is not in
    ``tables``; partners with negative size force everything to vanish.
    """
    fn, box, total = DUALITIES[rows]
    partner = total - N
    if partner < 0:
        return {}
    if partner not in tables:
        return None
    out: dict[int, dict] = {}
    for i2, rep in tables[partner].items():
        for lam2, c in rep.items():
            if len(lam2) > rows:
                continue
            if lam2 and lam2[0] > box:
                # not in the domain: such summands must not exist at all
                raise DualityDomainError(f"H_{i2}(C_{partner}) contains {lam2}")
            img = fn(lam2, i2 + 1, partner)
            out.setdefault(img.degree, {})[img.partition] = c
    return {i: VirtualRep(N, m) for i, m in out.items()}


def low_row_table(tables: Tables, n_range=range(14, 25), rows: int = 3) -> dict[tuple[int, int], VirtualRep]:
    """(n, i) -> at-most-``rows`` part of H_i(C^3_n) for each n in ``n_range``."""
    out = {}
    for n in n_range:
        pred = predicted_low_rows(tables, n, rows)
        if pred is None:
            raise ValueError(f"table for n = {(27 if rows == 3 else 10) - n} is missing")
        for i, rep in pred.items():
            if rep:
                out[(n, i)] = rep
    return out


def low_row_partitions(N: int, rows: int) -> list[Partition]:
    return enumerate_partitions(N, max_rows=rows)


def duality_violations(tables: Tables, rows: int) -> list[str]:
    """Multiplicity mismatches between dual pairs present in ``tables``."""
    fn, box, total = DUALITIES[rows]
    problems = []
    for N, degrees in sorted(tables.items()):
        partner = total - N
        if N > total or partner not in tables:
            continue
        for i, rep in degrees.items():
            for lam, c in rep.items():
                if len(lam) > rows:
                    continue
                if lam and lam[0] > box:
                    problems.append(f"H_{i}(C_{N}) contains {lam} outside the duality domain")
                    continue
                img = fn(lam, i + 1, N)
                other = tables[partner].get(img.degree)
                c2 = other.get(img.partition) if other else 0
                if c2 != c:
                    problems.append(
                        f"H_{i}(C_{N})[{lam}] = {c} but H_{img.degree}(C_{partner})[{img.partition}] = {c2}"
                    )
    return problems
