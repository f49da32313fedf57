"""Equivariant rational homology of matching complexes.

For each cycle type we pick one representative permutation and compute

    tr(sigma | H_i) = tr(sigma | C_i) - tr(sigma | im d_i) - tr(sigma | im d_{i+1})

using that C_i / ker d_i is isomorphic to im d_i as a representation.  The
trace on an invariant subspace W is read off a reduced row echelon basis of
W: with pivots p_j, tr(sigma | W) = sum_j (sigma b_j)[p_j].  Over GF(p)
this gives the integer trace modulo p whenever the modular ranks equal the
rational ones, and the character values are bounded by the dimension.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .branching import VirtualRep, vr_dim_sn
from .characters import ClassFunction, cycle_type_representative, decompose
from .complexes import MatchingComplexChain, boundary_matrix, build_matching_complex, face_permutation
from .linalg import PRIMES, certified_rank, lift_mod, rref_exact, rref_mod_p
from .partitions import enumerate_partitions

log = logging.getLogger(__name__)

EQUIVARIANT_BUDGET_N = 10
BETTI_BUDGET_N = 12


class BudgetExceeded(RuntimeError):
    pass


class HomologyError(ArithmeticError):
    pass


@dataclass
class EquivariantHomology:
    d: int
    n: int
    entries: dict[int, VirtualRep] = field(default_factory=dict)
    betti: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for i, rep in self.entries.items():
            if not rep.is_effective():
                raise HomologyError(f"degree {i} is not effective: {rep}")
            if i in self.betti and vr_dim_sn(rep) != self.betti[i]:
                raise HomologyError(f"degree {i}: dimension {vr_dim_sn(rep)} != betti {self.betti[i]}")

    def get(self, i: int) -> VirtualRep:
        return self.entries.get(i, VirtualRep(self.n))


def _ranks(cx: MatchingComplexChain) -> dict[int, int]:
    out = {}
    for r in cx.degrees():
        m = boundary_matrix(cx, r)
        out[r] = certified_rank(m) if m.entries else 0
    return out


def betti_numbers(cx: MatchingComplexChain) -> dict[int, int]:
    """Reduced Betti numbers (nonzero ones only), ker d_i minus rank d_{i+1}."""
    ranks = _ranks(cx)
    out = {}
    for i in cx.degrees():
        b = cx.dim(i) - ranks[i] - ranks.get(i + 1, 0)
        if b:
            out[i] = b
    return out


class _ImageTraces:
    """RREF bases of im d_k inside C_{k-1}, over one or more fields."""

    def __init__(self, cx: MatchingComplexChain, exact: bool = False, primes=PRIMES):
        self.cx = cx
        self.exact = exact
        self.primes = primes
        self._bases: dict = {}

    def _basis(self, k: int, p):
        key = (k, p)
        if key not in self._bases:
            m = boundary_matrix(self.cx, k).transpose()
            if p is None:
                self._bases[key] = rref_exact(m)
            elif m.rows == 0 or m.cols == 0:
                self._bases[key] = ([], np.zeros((0, m.cols), dtype=np.int64))
            else:
                self._bases[key] = rref_mod_p(m.to_dense_mod(p), p)
        return self._bases[key]

    def rank(self, k: int) -> int:
        if k not in self.cx.faces or k == min(self.cx.degrees()):
            return 0
        ranks = {len(self._basis(k, p)[0]) for p in self._fields()}
        if len(ranks) != 1:
            raise HomologyError(f"rank of d_{k} disagrees across fields: {ranks}")
        return ranks.pop()

    def _fields(self):
        return [None] if self.exact else list(self.primes)

    def trace(self, k: int, pre: list[int], sgn: list[int]) -> int:
        """Trace on im d_k of the signed permutation with preimage map ``pre``."""
        if k not in self.cx.faces or k == min(self.cx.degrees()):
            return 0
        values = set()
        for p in self._fields():
            pivots, rows = self._basis(k, p)
            if p is None:
                t = sum(sgn[c] * rows[j].get(pre[c], 0) for j, c in enumerate(pivots))
                values.add(int(t))
            else:
                if not pivots:
                    values.add(0)
                    continue
                cols = np.asarray(pivots)
                vals = rows[np.arange(len(pivots)), np.asarray(pre)[cols]]
                t = int((vals * np.asarray(sgn)[cols] % p).sum() % p)
                values.add(lift_mod(t, p))
        if len(values) != 1:
            raise HomologyError(f"trace on im d_{k} disagrees across fields: {values}")
        return values.pop()


def _preimages(cx: MatchingComplexChain, r: int, perm) -> tuple[list[int], list[int]]:
    targets, signs = face_permutation(cx, r, perm)
    pre = [0] * len(targets)
    sgn = [0] * len(targets)
    for x, (y, s) in enumerate(zip(targets, signs)):
        pre[y] = x
        sgn[y] = s
    return pre, sgn


def _all_traces(cx: MatchingComplexChain, exact: bool = False) -> dict[int, dict]:
    """``traces[i][t]`` for every degree i and cycle type t."""
    images = _ImageTraces(cx, exact=exact)
    out: dict[int, dict] = {i: {} for i in cx.degrees()}
    for t in enumerate_partitions(cx.n):
        perm = cycle_type_representative(t)
        pre = {r: _preimages(cx, r, perm) for r in cx.degrees()}
        for i in cx.degrees():
            p_i, s_i = pre[i]
            chain = sum(s_i[y] for y in range(len(p_i)) if p_i[y] == y)
            img_in = images.trace(i + 1, p_i, s_i) if (i + 1) in cx.faces else 0
            img_out = images.trace(i, *pre[i - 1]) if (i - 1) in cx.faces else 0
            out[i][t] = chain - img_in - img_out
    return out


def chain_character(cx: MatchingComplexChain, i: int) -> ClassFunction:
    """Character of S_n on the chain group C_i (signed fixed-face count)."""
    values = {}
    for t in enumerate_partitions(cx.n):
        pre, sgn = _preimages(cx, i, cycle_type_representative(t))
        values[t] = sum(sgn[y] for y in range(len(pre)) if pre[y] == y)
    return ClassFunction(cx.n, values)


def homology_character(cx: MatchingComplexChain, i: int, exact: bool = False) -> ClassFunction:
    traces = _all_traces(cx, exact=exact)
    return ClassFunction(cx.n, traces.get(i, {}))


def equivariant_homology(
    cx: MatchingComplexChain, exact: bool = False, max_n: int = EQUIVARIANT_BUDGET_N
) -> EquivariantHomology:
    if cx.n > max_n:
        raise BudgetExceeded(f"equivariant homology capped at n = {max_n}, got {cx.n}")
    traces = _all_traces(cx, exact=exact)
    identity = tuple([1] * cx.n)
    entries, betti = {}, {}
    for i, vals in traces.items():
        if not any(vals.values()):
            continue
        rep = decompose(ClassFunction(cx.n, vals))
        if not rep.is_effective():
            raise HomologyError(f"H_{i}(C^{cx.d}_{cx.n}) decomposes non-effectively: {rep}")
        entries[i] = rep
        betti[i] = vals[identity]
    log.info("C^%d_%d: %s", cx.d, cx.n, {i: str(v) for i, v in entries.items()})
    return EquivariantHomology(cx.d, cx.n, entries, betti)


def homology_of(d: int, n: int, exact: bool = False, max_n: int = EQUIVARIANT_BUDGET_N) -> EquivariantHomology:
    return equivariant_homology(build_matching_complex(d, n), exact=exact, max_n=max_n)


def hopf_defect(cx: MatchingComplexChain, traces: dict[int, dict]) -> dict:
    """Per class: alternating trace sum on homology minus that on chains."""
    out = {}
    for t in enumerate_partitions(cx.n):
        chains = sum((-1 if i % 2 else 1) * chain_character(cx, i)[t] for i in cx.degrees())
        hom = sum((-1 if i % 2 else 1) * traces[i][t] for i in cx.degrees())
        out[t] = hom - chains
    return out

