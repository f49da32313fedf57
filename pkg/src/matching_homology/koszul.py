"""Koszul cohomology of the Veronese modules M_b = sum_k Sym^{kd+b} V.

K_{p,q}(V, b) is the middle homology of

    L^{p+1} Sym^d V (x) Sym^{(q-1)d+b} V -> L^p Sym^d V (x) Sym^{qd+b} V -> L^{p-1} Sym^d V (x) Sym^{(q+1)d+b} V

with differential  f_1 ^ ... ^ f_p (x) g  ->  sum_j (-1)^j f_1 ^ .. f_j-hat .. ^ f_p (x) f_j g.

Everything here is computed on monomial bases and split by torus weight,
since the differential preserves the total exponent vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from collections import Counter
from itertools import combinations, permutations
from math import comb, factorial

from .branching import VirtualRep, truncate_rows, vr_dim_gl
from .linalg import SparseExactMatrix, rank_exact, rank_integer
from .partitions import Partition, enumerate_partitions

DIRECT_BUDGET = 200_000
# about four minutes of exact rank work per weight at this size
MULTIPLICITY_BUDGET = 30_000


class InfeasibleAtDeskScale(RuntimeError):
    pass


@dataclass(frozen=True)
class HData:
    d: int
    b: int
    m: int
    h: tuple[int, ...]
    codim: int


@lru_cache(maxsize=None)
def monomials(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree k in m variables, lexicographically descending."""
    if k < 0:
        return ()
    if m == 1:
        return ((k,),)
    out = []
    for a in range(k, -1, -1):
        for rest in monomials(m - 1, k - a):
            out.append((a,) + rest)
    return tuple(out)


def h_vector(d: int, b: int, m: int) -> HData:
    """h-vector of M_b: numerator of its Hilbert series over (1 - t)^m."""
    if m < 1 or not 0 <= b <= d - 1:
        raise ValueError("need m >= 1 and 0 <= b < d")
    terms = 2 * m + 4
    series = [comb(k * d + b + m - 1, m - 1) for k in range(terms)]
    h = []
    for k in range(terms):
        h.append(sum((-1) ** j * comb(m, j) * series[k - j] for j in range(0, min(k, m) + 1)))
    # numerator degree is below m; everything later must vanish
    if any(h[m:]):
        raise ArithmeticError(f"Hilbert series of M_{b} is not h(t)/(1-t)^{m}: {h}")
    h = h[:m]
    while h and h[-1] == 0:
        h.pop()
    if any(x < 0 for x in h):
        raise ArithmeticError(f"negative h-vector {h}")
    return HData(d, b, m, tuple(h), comb(m - 1 + d, d) - m)


def strand_euler(hd: HData, mdeg: int) -> int:
    """sum_{p+q=mdeg} (-1)^p dim K_{p,q}, from h(t) (1-t)^codim."""
    return sum((-1) ** (mdeg - j) * hj * comb(hd.codim, mdeg - j) for j, hj in enumerate(hd.h) if mdeg - j >= 0)


def trans_dim_check(x: VirtualRep, m: int) -> int:
    """Predicted dim K_{p,q}(V, b), dim V = m, from the homology entry x."""
    return vr_dim_gl(truncate_rows(x, m), m)


# --- the complex on monomial bases -------------------------------------------


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


class KoszulStrand:
    """The three-term complex around L^p Sym^d V (x) Sym^{qd+b} V."""

    def __init__(self, m: int, d: int, b: int, p: int, q: int):
        self.m, self.d, self.b, self.p, self.q = m, d, b, p, q
        self.gens = monomials(m, d)

    def degree(self, p: int) -> int:
        """Degree of the Sym factor paired with L^p in this strand."""
        return (self.p + self.q - p) * self.d + self.b

    def term_dim(self, p: int) -> int:
        e = self.degree(p)
        if p < 0 or e < 0:
            return 0
        return comb(len(self.gens), p) * comb(e + self.m - 1, self.m - 1)

    def basis(self, p: int, weight=None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """(wedge index tuple, Sym monomial) pairs, optionally of one weight."""
        e = self.degree(p)
        if p < 0 or e < 0 or p > len(self.gens):
            return []
        out = []
        gens = self.gens
        if weight is None:
            for idx in combinations(range(len(gens)), p):
                for g in monomials(self.m, e):
                    out.append((idx, g))
            return out
        for g in monomials(self.m, e):
            rest = _sub(weight, g)
            if min(rest, default=0) < 0:
                continue
            for idx in _subsets_with_sum(gens, p, rest):
                out.append((idx, g))
        return out

    def weight_dim(self, p: int, weight) -> int:
        """Size of ``basis(p, weight)`` by counting, without listing it."""
        e = self.degree(p)
        if p < 0 or e < 0 or p > len(self.gens):
            return 0
        weight = tuple(weight)
        # counts[k][v]: k-subsets of the generators seen so far with exponent sum v
        counts: list[dict] = [dict() for _ in range(p + 1)]
        counts[0][(0,) * self.m] = 1
        for g in self.gens:
            for k in range(p, 0, -1):
                for v, c in counts[k - 1].items():
                    u = _add(v, g)
                    if all(a <= b for a, b in zip(u, weight)):
                        counts[k][u] = counts[k].get(u, 0) + c
        return sum(counts[p].get(_sub(weight, g), 0) for g in monomials(self.m, e))

    def differential(self, p: int, src: list, dst: list) -> SparseExactMatrix:
        """Matrix of L^p (x) Sym -> L^{p-1} (x) Sym between the given bases."""
        index = {x: i for i, x in enumerate(dst)}
        entries = {}
        for j, (idx, g) in enumerate(src):
            for pos in range(len(idx)):
                key = (idx[:pos] + idx[pos + 1:], _add(self.gens[idx[pos]], g))
                i = index.get(key)
                if i is None:
                    raise KeyError(f"image {key} missing from target basis")
                entries[(i, j)] = entries.get((i, j), 0) + (-1) ** pos
        return SparseExactMatrix(len(dst), len(src), entries)

    def weight_homology_dim(self, weight, reference: bool = False) -> int:
        mid = self.basis(self.p, weight)
        if not mid:
            return 0
        left = self.basis(self.p + 1, weight)
        right = self.basis(self.p - 1, weight)
        r_out = _rank(self.differential(self.p, mid, right), reference) if right else 0
        r_in = _rank(self.differential(self.p + 1, left, mid), reference) if left else 0
        return len(mid) - r_out - r_in


def _rank(mat: SparseExactMatrix, reference: bool) -> int:
    if not mat.entries:
        return 0
    return rank_exact(mat) if reference else rank_integer(mat)


def _subsets_with_sum(gens, p: int, target) -> list[tuple[int, ...]]:
    """Strictly increasing index p-tuples into gens whose exponents sum to target."""
    out = []
    n = len(gens)

    def rec(start: int, left: int, rem, acc):
        if left == 0:
            if not any(rem):
                out.append(tuple(acc))
            return
        for i in range(start, n - left + 1):
            g = gens[i]
            nxt = _sub(rem, g)
            if min(nxt) < 0:
                continue
            acc.append(i)
            rec(i + 1, left - 1, nxt, acc)
            acc.pop()

    rec(0, p, tuple(target), [])
    return out


def _dominant_weights(m: int, total: int):
    """Weakly decreasing weights of degree ``total`` with their S_m orbit sizes."""
    for lam in enumerate_partitions(total, max_rows=m):
        w = tuple(lam) + (0,) * (m - len(lam))
        orbit = factorial(m)
        for c in Counter(w).values():
            orbit //= factorial(c)
        yield w, orbit


def koszul_dim_direct(m: int, d: int, b: int, p: int, q: int, budget: int | None = DIRECT_BUDGET, reference: bool = False) -> int:
    """dim K_{p,q}(V, b) for dim V = m by direct rank computation.

    Weight spaces of one S_m orbit have equal dimension, so only dominant
    weights are computed.  ``budget=None`` lifts the middle-term cap.
    """
    strand = KoszulStrand(m, d, b, p, q)
    size = strand.term_dim(p)
    if budget is not None and size > budget:
        raise InfeasibleAtDeskScale(
            f"middle term of K_{p},{q}(V,{b}) with dim V = {m} has dimension {size} > {budget}"
        )
    if size == 0:
        return 0
    total = (p + q) * d + b
    return sum(orbit * strand.weight_homology_dim(w, reference) for w, orbit in _dominant_weights(m, total))


def multiplicity_cost(lam: Partition, d: int, b: int, p: int, q: int, m: int | None = None) -> int:
    """Total size of the three weight spaces at ``lam``; bounds every weight the alternation visits."""
    m = m or max(len(lam), 1)
    strand = KoszulStrand(m, d, b, p, q)
    weight = tuple(lam) + (0,) * (m - len(lam))
    return sum(strand.weight_dim(k, weight) for k in (p - 1, p, p + 1))


def koszul_multiplicity(
    lam: Partition,
    d: int,
    b: int,
    p: int,
    q: int,
    m: int | None = None,
    reference: bool = False,
    budget: int | None = None,
) -> int:
    """Multiplicity of S_lam(V) in K_{p,q}(V, b), dim V = m (default rows(lam)).

    Weyl alternation over the weight spaces of the homology:
    mult = sum_{w in S_m} sgn(w) dim K_{lam + rho - w rho}.
    """
    m = m or max(len(lam), 1)
    if len(lam) > m:
        return 0
    if sum(lam) != (p + q) * d + b:
        raise ValueError(f"|{lam}| != (p+q)d+b")
    if budget is not None:
        cost = multiplicity_cost(lam, d, b, p, q, m)
        if cost > budget:
            raise InfeasibleAtDeskScale(f"weight spaces of {tuple(lam)} in K_{p},{q}(V,{b}) total {cost} > {budget}")
    strand = KoszulStrand(m, d, b, p, q)
    lam = tuple(lam) + (0,) * (m - len(lam))
    rho = tuple(range(m - 1, -1, -1))
    total = 0
    for perm in permutations(range(m)):
        wr = tuple(rho[perm[i]] for i in range(m))
        weight = tuple(lam[i] + rho[i] - wr[i] for i in range(m))
        if min(weight) < 0:
            continue
        total += _perm_sign(perm) * strand.weight_homology_dim(weight, reference)
    if total < 0:
        raise ArithmeticError(f"negative multiplicity {total} for {lam}")
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def koszul_table(m: int, d: int, b: int, max_pq: int, budget: int = DIRECT_BUDGET) -> dict[tuple[int, int], int]:
    """All feasible nonzero dim K_{p,q}(V,b) with p + q <= max_pq."""
    out = {}
    for total in range(0, max_pq + 1):
        for p in range(0, total + 1):
            q = total - p
            try:
                v = koszul_dim_direct(m, d, b, p, q, budget)
            except InfeasibleAtDeskScale:
                continue
            if v:
                out[(p, q)] = v
    return out


__all__ = [
    "HData",
    "InfeasibleAtDeskScale",
    "KoszulStrand",
    "h_vector",
    "koszul_dim_direct",
    "koszul_multiplicity",
    "koszul_table",
    "monomials",
    "multiplicity_cost",
    "strand_euler",
    "trans_dim_check",
]
