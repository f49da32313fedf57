"""Exact sparse linear algebra for boundary and action matrices.

Three rank paths are provided.  ``rank_exact`` is fraction-free elimination
over the integers (content-normalised rows), the reference.  ``rref_mod_p``
is dense Gauss-Jordan over GF(p) with numpy, used for speed; its ranks are
only trusted when two primes agree (see ``certified_rank``).  ``rank_integer``
hands the matrix to FLINT and is exact; the Koszul weight spaces use it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import flint
import numpy as np

PRIMES = (2147483629, 2147483587)


@dataclass
class SparseExactMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in list(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if v == 0:
                del self.entries[(i, j)]

    def __matmul__(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + v * w
        return SparseExactMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseExactMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "SparseExactMatrix":
        return SparseExactMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def to_dense_mod(self, p: int) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (i, j), v in self.entries.items():
            a[i, j] = int(v) % p
        return a

    def trace(self):
        return sum(v for (i, j), v in self.entries.items() if i == j)

    @classmethod
    def identity(cls, n: int) -> "SparseExactMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})


def _normalise(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def rank_exact(m: SparseExactMatrix) -> int:
    """Rank over Q by fraction-free sparse elimination.

    Entries must be integers or Fractions; Fractions are cleared row by row.
    Each elimination step replaces r by a*r - b*s and divides out the row
    content, so all arithmetic stays in Z.
    """
    rows = []
    for r in m.row_dicts():
        if not r:
            continue
        den = 1
        for v in r.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        rows.append(_normalise({k: int(v * den) for k, v in r.items()}))
    pivots: dict[int, dict] = {}
    rank = 0
    # shortest rows first keeps fill-in down on boundary matrices
    rows.sort(key=len)
    for r in rows:
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = r
                rank += 1
                break
            a, b = piv[col], r[col]
            new = {k: a * v for k, v in r.items()}
            for k, v in piv.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            r = _normalise(new) if new else new
    return rank


def rref_exact(m: SparseExactMatrix) -> tuple[list[int], list[dict]]:
    """Reduced row echelon form of the row space over Q (Fraction entries)."""
    basis: dict[int, dict] = {}
    for r in m.row_dicts():
        v = {k: Fraction(x) for k, x in r.items()}
        for c in [c for c in v if c in basis]:
            coef = v.get(c)
            if not coef:
                continue
            for k, x in basis[c].items():
                nv = v.get(k, 0) - coef * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        if not v:
            continue
        c = min(v)
        inv = 1 / v[c]
        v = {k: x * inv for k, x in v.items()}
        for pc, row in basis.items():
            coef = row.get(c)
            if coef:
                for k, x in v.items():
                    nv = row.get(k, 0) - coef * x
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        basis[c] = v
    pivots = sorted(basis)
    return pivots, [basis[c] for c in pivots]


def rref_mod_p(a: np.ndarray, p: int) -> tuple[list[int], np.ndarray]:
    """Gauss-Jordan over GF(p) on a dense int64 array (copied).

    Returns pivot columns and the nonzero rows of the RREF, in pivot order.
    ``p`` must be below 2**31 so products fit in int64.
    """
    a = np.array(a, dtype=np.int64, copy=True) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            f = a[others, c][:, None]
            a[np.ix_(others, np.arange(c, ncols))] = (a[others, c:] - f * a[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots, a[:r]


def rank_mod_p(m: SparseExactMatrix, p: int) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    a = m.to_dense_mod(p)
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref_mod_p(a, p)[0])


def certified_rank(
    m: SparseExactMatrix,
    primes=PRIMES,
    exact_budget: int = 20000,
    sample_rate: float = 0.1,
    rng: random.Random | None = None,
) -> int:
    """Rank that agrees across two primes, checked over Q when small or sampled.

    Modular rank never exceeds the rational rank, so agreement of two large
    primes plus spot checks against ``rank_exact`` bounds the risk.
    """
    ranks = {rank_mod_p(m, p) for p in primes}
    if len(ranks) != 1:
        raise ArithmeticError(f"modular ranks disagree: {sorted(ranks)}")
    (r,) = ranks
    rng = rng or random.Random(0)
    if len(m.entries) <= exact_budget or rng.random() < sample_rate:
        exact = rank_exact(m)
        if exact != r:
            raise ArithmeticError(f"modular rank {r} != exact rank {exact}")
    return r


def rank_integer(m: SparseExactMatrix) -> int:
    """Exact rank over Q through FLINT's integer matrices."""
    if not m.entries:
        return 0
    a = flint.fmpz_mat(m.rows, m.cols)
    for (i, j), v in m.entries.items():
        a[i, j] = v
    return a.rank()


def lift_mod(x: int, p: int) -> int:
    """Symmetric lift of a residue to (-p/2, p/2]."""
    x %= p
    return x - p if x > p // 2 else x
