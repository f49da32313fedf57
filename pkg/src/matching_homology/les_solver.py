"""Multiplicity constraints from the equivariant long exact sequence.

For |A| = n, B = A minus a point, C = A minus a d-block through that point,
the sequence of S_{n-1} representations

    ... -> Ind H_r(C_{n-d}) -f_r-> H_r(C_{n-1}) -> Res H_r(C_n) -> Ind H_{r-1}(C_{n-d}) -f_{r-1}-> ...

splits over Q, so with m_r the (unknown) image of f_r,

    Res H_r(C_n) = H_r(C_{n-1}) - m_r + Ind H_{r-1}(C_{n-d}) - m_{r-1},
    0 <= m_r <= min(Ind H_r(C_{n-d}), H_r(C_{n-1})).

``les_bounds`` gives the per-degree sandwich lower <= Res H_r <= upper that
follows from this; ``les_system`` keeps the images as variables and couples
all degrees into one system.  ``solve_nonneg`` enumerates every
non-negative integer solution by depth-first search with bound propagation.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Hashable, Iterable, Mapping

import flint

from .branching import (
    VirtualRep,
    componentwise_min,
    induce_trivial_strip,
    positive_part,
    restrict,
)
from .partitions import Partition, add_box, dim_gl, dim_sn, from_json, remove_box

log = logging.getLogger(__name__)

Label = tuple  # ("x", degree, partition) or ("m", degree, partition)


@dataclass(frozen=True)
class Relation:
    coeffs: tuple[tuple[Label, int], ...]
    op: str
    rhs: int
    note: str = ""

    def __post_init__(self):
        if self.op not in ("=", "<=", ">="):
            raise ValueError(f"unknown relation {self.op!r}")

    def holds(self, values: Mapping[Label, int]) -> bool:
        lhs = sum(c * values.get(v, 0) for v, c in self.coeffs)
        return {"=": lhs == self.rhs, "<=": lhs <= self.rhs, ">=": lhs >= self.rhs}[self.op]


def relation(coeffs: Mapping[Label, int] | Iterable[tuple[Label, int]], op: str, rhs: int, note: str = "") -> Relation:
    items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    acc: dict = {}
    for v, c in items:
        acc[v] = acc.get(v, 0) + c
    return Relation(tuple((v, c) for v, c in acc.items() if c), op, int(rhs), note)


@dataclass
class ConstraintSystem:
    """Linear relations over non-negative integer multiplicity variables."""

    n: int
    variables: list[Label] = field(default_factory=list)
    upper: dict[Label, int] = field(default_factory=dict)
    fixed: dict[Label, int] = field(default_factory=dict)
    relations: list[Relation] = field(default_factory=list)
    infeasible: list[str] = field(default_factory=list)

    def add_variable(self, label: Label, upper: int) -> None:
        if label in self.upper:
            self.upper[label] = min(self.upper[label], upper)
        else:
            self.variables.append(label)
            self.upper[label] = upper

    def fix(self, label: Label, value: int) -> None:
        if label not in self.upper:
            if value:
                self.infeasible.append(f"{_label_str(label)} must be {value} but is not a candidate")
            return
        self.fixed[label] = value

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "variables": [
                {"label": _label_json(v), "upper": self.upper[v], **({"fixed": self.fixed[v]} if v in self.fixed else {})}
                for v in self.variables
            ],
            "relations": [
                {"terms": [[_label_json(v), c] for v, c in r.coeffs], "op": r.op, "rhs": r.rhs, "note": r.note}
                for r in self.relations
            ],
            "infeasible": list(self.infeasible),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConstraintSystem":
        sys = cls(int(data["n"]))
        for rec in data["variables"]:
            label = _label_from_json(rec["label"])
            sys.add_variable(label, int(rec["upper"]))
            if "fixed" in rec:
                sys.fixed[label] = int(rec["fixed"])
        for rec in data["relations"]:
            terms = [(_label_from_json(v), int(c)) for v, c in rec["terms"]]
            sys.relations.append(relation(terms, rec["op"], rec["rhs"], rec.get("note", "")))
        sys.infeasible = list(data.get("infeasible", []))
        return sys

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


def _label_json(label: Label) -> dict:
    kind, degree, lam = label
    return {"kind": kind, "degree": degree, "partition": list(lam)}


def _label_from_json(data: dict) -> Label:
    return (data["kind"], int(data["degree"]), from_json(data["partition"]))


def _label_str(label: Label) -> str:
    kind, degree, lam = label
    return f"{kind}[{degree}]({','.join(map(str, lam))})"


@dataclass
class SolutionSet:
    n: int
    solutions: list[dict[Label, int]] = field(default_factory=list)
    complete: bool = True
    nodes: int = 0

    def __len__(self) -> int:
        return len(self.solutions)

    def representations(self, kind: str = "x") -> list[dict[int, VirtualRep]]:
        """Each solution as degree -> VirtualRep (only the ``kind`` variables)."""
        out = []
        for sol in self.solutions:
            per: dict[int, dict] = {}
            for (k, degree, lam), v in sol.items():
                if k == kind and v:
                    per.setdefault(degree, {})[lam] = v
            n = self.n if kind == "x" else self.n - 1
            out.append({degree: VirtualRep(n, m) for degree, m in sorted(per.items())})
        return out

    def distinct_representations(self, kind: str = "x") -> list[dict[int, VirtualRep]]:
        seen, out = set(), []
        for rep in self.representations(kind):
            key = tuple(sorted((i, v) for i, v in rep.items()))
            if key not in seen:
                seen.add(key)
                out.append(rep)
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "complete": self.complete,
            "solutions": [
                {str(i): rep.to_records() for i, rep in sol.items()} for sol in self.representations("x")
            ],
        }


# --- the long exact sequence ------------------------------------------------


def _les_terms(d: int, n: int, h_prev: Mapping[int, VirtualRep], h_prev_d: Mapping[int, VirtualRep]):
    if n < 2 * d:
        raise ValueError(f"the long exact sequence needs n >= 2d, got n = {n}")
    P = {i: v for i, v in h_prev.items() if v}
    I = {i: induce_trivial_strip(v, d - 1) for i, v in h_prev_d.items() if v}
    for v in list(P.values()) + list(I.values()):
        if not v.is_effective():
            raise ValueError("input homology must be effective")
        if v.n != n - 1:
            raise ValueError("input homology has the wrong ground set size")
    degrees = sorted(set(P) | {i + 1 for i in I})
    return P, I, degrees


def les_bounds(
    d: int, n: int, h_prev: Mapping[int, VirtualRep], h_prev_d: Mapping[int, VirtualRep]
) -> dict[int, tuple[VirtualRep, VirtualRep]]:
    """Per degree r: (lower, upper) with lower <= Res H_r(C_n) <= upper.

    ``h_prev`` is the homology of C_{n-1}, ``h_prev_d`` that of C_{n-d}.
    Degrees absent from the result have Res H_r(C_n) = 0.
    """
    P, I, degrees = _les_terms(d, n, h_prev, h_prev_d)
    zero = VirtualRep(n - 1)
    out = {}
    for r in degrees:
        p_r, p_below = P.get(r, zero), P.get(r - 1, zero)
        i_r, i_below = I.get(r, zero), I.get(r - 1, zero)
        upper = p_r + i_below
        lower = positive_part(p_r - i_r) + positive_part(i_below - p_below)
        if not lower.le(upper):
            raise ValueError(f"degree {r}: lower bound {lower} exceeds upper bound {upper}")
        if upper:
            out[r] = (lower, upper)
    return out


def candidate_partitions(upper: VirtualRep, extra_row_cap: int | None = None) -> list[Partition]:
    """All lam of n+1 whose restriction fits inside ``upper``."""
    if not upper:
        return []
    found = set()
    for mu in upper:
        for lam in add_box(mu):
            if extra_row_cap is not None and len(lam) > extra_row_cap:
                continue
            if all(upper.get(nu) >= 1 for nu in remove_box(lam)):
                found.add(lam)
    return sorted(found, reverse=True)


def _max_mult(lam: Partition, upper: VirtualRep) -> int:
    return min(upper.get(mu) for mu in remove_box(lam))


def appendix_system(degree: int, lower: VirtualRep, upper: VirtualRep, extra_row_cap: int | None = None) -> ConstraintSystem:
    """One-degree system: find X with lower <= Res X <= upper."""
    n = upper.n + 1
    sys = ConstraintSystem(n)
    for lam in candidate_partitions(upper, extra_row_cap):
        sys.add_variable(("x", degree, lam), _max_mult(lam, upper))
    cover: dict[Partition, list] = {}
    for label in sys.variables:
        for mu in remove_box(label[2]):
            cover.setdefault(mu, []).append(label)
    for mu in sorted(set(cover) | set(lower) | set(upper), reverse=True):
        terms = [(v, 1) for v in cover.get(mu, [])]
        lo, hi = lower.get(mu), upper.get(mu)
        if lo == hi:
            sys.relations.append(relation(terms, "=", lo, f"Res[{degree}]{mu}"))
        else:
            if lo:
                sys.relations.append(relation(terms, ">=", lo, f"Res[{degree}]{mu} lower"))
            sys.relations.append(relation(terms, "<=", hi, f"Res[{degree}]{mu} upper"))
    return sys


def les_system(
    d: int,
    n: int,
    h_prev: Mapping[int, VirtualRep],
    h_prev_d: Mapping[int, VirtualRep],
    known_low_rows: Mapping[int, Mapping[int, VirtualRep]] | None = None,
    max_rows: Mapping[int, int] | None = None,
) -> ConstraintSystem:
    """Joint system for all degrees of C_n, with image multiplicities as unknowns.

    ``known_low_rows[k]`` maps degree -> the exact at-most-k-row part of
    H_degree(C_n) (degrees absent have zero such part).  ``max_rows[r]`` caps
    the number of rows of candidates in degree r.
    """
    P, I, degrees = _les_terms(d, n, h_prev, h_prev_d)
    zero = VirtualRep(n - 1)
    sys = ConstraintSystem(n)
    rhs: dict[tuple[int, Partition], int] = {}
    for r in degrees:
        upper = P.get(r, zero) + I.get(r - 1, zero)
        cap = None if max_rows is None else max_rows.get(r)
        for lam in candidate_partitions(upper, cap):
            sys.add_variable(("x", r, lam), _max_mult(lam, upper))
        for mu, c in upper.items():
            rhs[(r, mu)] = c
    for r in degrees:
        img = componentwise_min(I.get(r, zero), P.get(r, zero))
        for mu, c in img.items():
            if c > 0:
                sys.add_variable(("m", r, mu), c)
    terms: dict[tuple[int, Partition], list] = {key: [] for key in rhs}
    for label in sys.variables:
        kind, r, lam = label
        if kind == "x":
            for mu in remove_box(lam):
                terms.setdefault((r, mu), []).append((label, 1))
        else:
            terms.setdefault((r, lam), []).append((label, 1))
            terms.setdefault((r + 1, lam), []).append((label, 1))
    for (r, mu), ts in sorted(terms.items(), key=lambda kv: (kv[0][0], kv[0][1]), reverse=True):
        sys.relations.append(relation(ts, "=", rhs.get((r, mu), 0), f"Res H_{r} at {mu}"))
    # the images cancel in the alternating sum; stating it directly helps propagation
    euler: dict[Partition, list] = {}
    euler_rhs: dict[Partition, int] = {}
    for (r, mu), c in rhs.items():
        euler_rhs[mu] = euler_rhs.get(mu, 0) + (-1 if r % 2 else 1) * c
    for label in sys.variables:
        kind, r, lam = label
        if kind == "x":
            for mu in remove_box(lam):
                euler.setdefault(mu, []).append((label, -1 if r % 2 else 1))
    for mu in sorted(set(euler) | set(euler_rhs), reverse=True):
        if len({r for (_, r, _), _ in euler.get(mu, [])}) > 1:
            sys.relations.append(relation(euler.get(mu, []), "=", euler_rhs.get(mu, 0), f"Euler characteristic at {mu}"))
    for k, table in (known_low_rows or {}).items():
        for label in sys.variables:
            kind, r, lam = label
            if kind == "x" and len(lam) <= k:
                sys.fix(label, table.get(r, VirtualRep(n)).get(lam))
        for r, rep in table.items():
            for lam, c in rep.items():
                if ("x", r, lam) not in sys.upper and c:
                    sys.infeasible.append(f"H_{r} must contain {c}x{lam}, which the sequence excludes")
    return sys


def gl_dimension_relation(degree_signs: Mapping[int, int], m: int, value: int, candidates: Iterable[Label], note: str) -> Relation:
    """sum_r sign_r * dim S_lam(C^m) * x[r, lam] = value."""
    terms = []
    for label in candidates:
        kind, r, lam = label
        if kind == "x" and r in degree_signs and len(lam) <= m:
            terms.append((label, degree_signs[r] * dim_gl(lam, m)))
    return relation(terms, "=", value, note)


# --- the solver ---------------------------------------------------------------


def _column_order(label: Label):
    kind, r, lam = label
    return (0 if kind == "m" else 1, -r, -dim_sn(lam))


class _Search:
    def __init__(self, sys: ConstraintSystem, extra: Iterable[Relation], max_solutions: int, max_nodes: int):
        self.labels = list(sys.variables)
        self.index = {v: i for i, v in enumerate(self.labels)}
        self.cons = []
        self.infeasible = bool(sys.infeasible)
        for rel in list(sys.relations) + list(extra):
            idx, coef = [], []
            for v, c in rel.coeffs:
                if v not in self.index:
                    # a variable absent from the system is identically zero
                    continue
                idx.append(self.index[v])
                coef.append(c)
            if rel.op in ("=", "<="):
                self.cons.append((idx, coef, rel.rhs, "<="))
            if rel.op in ("=", ">="):
                self.cons.append((idx, coef, rel.rhs, ">="))
        self.lo = [0] * len(self.labels)
        self.hi = [sys.upper[v] for v in self.labels]
        for v, val in sys.fixed.items():
            i = self.index[v]
            if not (0 <= val <= self.hi[i]):
                self.infeasible = True
            self.lo[i] = self.hi[i] = val
        self.pivot = [False] * len(self.labels)
        if not self.infeasible:
            self._add_reduced_equalities()
        self.watch = [[] for _ in self.labels]
        for k, (idx, _, _, _) in enumerate(self.cons):
            for i in idx:
                self.watch[i].append(k)
        self.priority = [self._priority(v) for v in self.labels]
        self.max_solutions = max_solutions
        self.max_nodes = max_nodes
        self.nodes = 0
        self.solutions: list[list[int]] = []
        self.complete = True

    def _add_reduced_equalities(self) -> None:
        """Append the reduced row echelon form of all equalities as constraints.

        Each reduced row involves one pivot plus non-pivot columns only, so
        once the non-pivot variables are assigned, propagation pins the pivots.
        Image variables and higher degrees are placed first so that they end
        up as pivots and the search branches on low-degree multiplicities.
        """
        free = [i for i in range(len(self.labels)) if self.lo[i] < self.hi[i]]
        free.sort(key=lambda i: _column_order(self.labels[i]))
        eqs = {}
        for idx, coef, rhs, op in self.cons:
            key = (tuple(idx), tuple(coef), rhs)
            if op == "<=":
                eqs[key] = eqs.get(key, 0) | 1
            else:
                eqs[key] = eqs.get(key, 0) | 2
        rows = [key for key, ops in eqs.items() if ops == 3]
        if not rows or not free:
            return
        col = {i: j for j, i in enumerate(free)}
        a = flint.fmpz_mat(len(rows), len(free) + 1)
        for r, (idx, coef, rhs) in enumerate(rows):
            b = rhs
            for i, c in zip(idx, coef):
                if i in col:
                    a[r, col[i]] += c
                else:
                    b -= c * self.lo[i]
            a[r, len(free)] = b
        reduced, _, rank = a.rref()
        for row in reduced.tolist()[:rank]:
            row = [int(x) for x in row]
            lead = next((j for j, x in enumerate(row) if x), None)
            if lead is not None and lead < len(free):
                self.pivot[free[lead]] = True
            g = 0
            for x in row:
                g = gcd(g, x)
            row = [x // g for x in row]
            idx = [free[j] for j, c in enumerate(row[:-1]) if c]
            if not idx:
                # a pivot in the right-hand column: the equalities are inconsistent
                self.infeasible = True
                return
            coef = [c for c in row[:-1] if c]
            self.cons.append((idx, coef, row[-1], "<="))
            self.cons.append((idx, coef, row[-1], ">="))

    @staticmethod
    def _priority(label: Label):
        kind, r, lam = label
        return (0 if kind == "x" else 1, -dim_sn(lam) if kind == "x" else 0)

    def propagate(self, lo: list[int], hi: list[int], queue: list[int]) -> bool:
        cons = self.cons
        pending = set(queue)
        stack = list(pending)
        while stack:
            k = stack.pop()
            pending.discard(k)
            idx, coef, rhs, op = cons[k]
            if op == "<=":
                total = 0
                for i, a in zip(idx, coef):
                    total += a * lo[i] if a > 0 else a * hi[i]
                if total > rhs:
                    return False
                slack = rhs - total
                for i, a in zip(idx, coef):
                    if a > 0:
                        bound = lo[i] + slack // a
                        if bound < hi[i]:
                            hi[i] = bound
                            self._wake(i, k, pending, stack)
                    else:
                        bound = hi[i] - slack // (-a)
                        if bound > lo[i]:
                            lo[i] = bound
                            self._wake(i, k, pending, stack)
            else:
                total = 0
                for i, a in zip(idx, coef):
                    total += a * hi[i] if a > 0 else a * lo[i]
                if total < rhs:
                    return False
                slack = total - rhs
                for i, a in zip(idx, coef):
                    if a > 0:
                        bound = hi[i] - slack // a
                        if bound > lo[i]:
                            lo[i] = bound
                            self._wake(i, k, pending, stack)
                    else:
                        bound = lo[i] + slack // (-a)
                        if bound < hi[i]:
                            hi[i] = bound
                            self._wake(i, k, pending, stack)
        return all(l <= h for l, h in zip(lo, hi))

    def _wake(self, i: int, current: int, pending: set, stack: list) -> None:
        for k in self.watch[i]:
            if k != current and k not in pending:
                pending.add(k)
                stack.append(k)

    def run(self) -> None:
        if self.infeasible:
            return
        lo, hi = list(self.lo), list(self.hi)
        if not all(l <= h for l, h in zip(lo, hi)):
            return
        if self.propagate(lo, hi, list(range(len(self.cons)))):
            self._dfs(lo, hi)

    def _dfs(self, lo: list[int], hi: list[int]) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes or len(self.solutions) >= self.max_solutions:
            self.complete = False
            return
        best, key = -1, None
        for i in range(len(lo)):
            if lo[i] < hi[i]:
                k = (self.pivot[i], hi[i] - lo[i], self.priority[i])
                if key is None or k < key:
                    best, key = i, k
        if best < 0:
            self.solutions.append(list(lo))
            return
        for val in range(lo[best], hi[best] + 1):
            lo2, hi2 = list(lo), list(hi)
            lo2[best] = hi2[best] = val
            if self.propagate(lo2, hi2, self.watch[best]):
                self._dfs(lo2, hi2)
            if not self.complete:
                return


def solve_nonneg(
    sys: ConstraintSystem,
    extra: Iterable[Relation] = (),
    max_solutions: int = 1000,
    max_nodes: int = 2_000_000,
) -> SolutionSet:
    """All non-negative integer solutions of ``sys`` plus ``extra`` relations.

    Solutions come back in lexicographic order of the variable list.  If a cap
    is hit the set is returned with ``complete = False``.
    """
    search = _Search(sys, extra, max_solutions, max_nodes)
    search.run()
    sols = sorted(search.solutions)
    out = SolutionSet(sys.n, complete=search.complete, nodes=search.nodes)
    for vals in sols:
        out.solutions.append({v: x for v, x in zip(search.labels, vals) if x})
    return out


def verify_solution(sys: ConstraintSystem, solution: Mapping[Label, int], extra: Iterable[Relation] = ()) -> bool:
    if any(v < 0 for v in solution.values()):
        return False
    if any(solution.get(v, 0) != val for v, val in sys.fixed.items()):
        return False
    if any(solution.get(v, 0) > sys.upper.get(v, 0) for v in solution):
        return False
    return all(r.holds(solution) for r in list(sys.relations) + list(extra))


def restriction_sandwich(x: VirtualRep, lower: VirtualRep, upper: VirtualRep) -> bool:
    res = restrict(x)
    return lower.le(res) and res.le(upper)
