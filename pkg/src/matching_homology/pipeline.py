"""End-to-end derivation of the homology of C^3_n for n <= 24.

The derivation is a fixed script of named steps.  Each step records which
inputs and facts it consumed, what it asserts, and what it found; a failed
assertion aborts the run with the step attached to the exception.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .branching import VirtualRep, vr_dim_gl
from .duality import degree_to_pqb, duality_violations, predicted_low_rows
from .facts import Fact, FactRegistry
from .homology import EQUIVARIANT_BUDGET_N, homology_of
from .koszul import (
    InfeasibleAtDeskScale,
    MULTIPLICITY_BUDGET,
    h_vector,
    koszul_dim_direct,
    koszul_multiplicity,
    multiplicity_cost,
    strand_euler,
    trans_dim_check,
)
from .les_solver import Relation, SolutionSet, gl_dimension_relation, les_system, solve_nonneg
from .partitions import from_json

log = logging.getLogger(__name__)

PROVENANCES = ("brute-force", "les-derived", "duality", "external-fact-assisted")


# --- the table ------------------------------------------------------------------


@dataclass
class HomologyTable:
    d: int = 3
    entries: dict[tuple[int, int], VirtualRep] = field(default_factory=dict)
    provenance: dict[tuple[int, int], str] = field(default_factory=dict)
    covered: set[int] = field(default_factory=set)

    def homology(self, n: int) -> dict[int, VirtualRep]:
        if n not in self.covered:
            raise KeyError(f"n = {n} is not in the table")
        return {i: rep for (m, i), rep in sorted(self.entries.items()) if m == n}

    def get(self, n: int, i: int) -> VirtualRep:
        return self.entries.get((n, i), VirtualRep(n))

    def set_homology(self, n: int, reps: Mapping[int, VirtualRep], provenance: str | Mapping[int, str]) -> None:
        for key in [k for k in self.entries if k[0] == n]:
            del self.entries[key]
            self.provenance.pop(key, None)
        for i, rep in reps.items():
            if not rep:
                continue
            if not rep.is_effective():
                raise ValueError(f"H_{i}(C_{n}) = {rep} is not effective")
            tag = provenance if isinstance(provenance, str) else provenance[i]
            if tag not in PROVENANCES:
                raise ValueError(f"unknown provenance {tag!r}")
            self.entries[(n, i)] = rep
            self.provenance[(n, i)] = tag
        self.covered.add(n)

    def as_tables(self) -> dict[int, dict[int, VirtualRep]]:
        return {n: self.homology(n) for n in sorted(self.covered)}

    def to_jsonl(self) -> str:
        lines = []
        for (n, i), rep in sorted(self.entries.items()):
            rec = {"d": self.d, "n": n, "i": i, "rep": rep.to_records(), "provenance": self.provenance[(n, i)]}
            lines.append(json.dumps(rec, separators=(",", ":")))
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_jsonl(cls, text: str) -> "HomologyTable":
        table = None
        per: dict[int, dict[int, VirtualRep]] = {}
        tags: dict[int, dict[int, str]] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if table is None:
                table = cls(d=rec["d"])
            n, i = rec["n"], rec["i"]
            per.setdefault(n, {})[i] = VirtualRep.from_records(n, rec["rep"])
            tags.setdefault(n, {})[i] = rec["provenance"]
        table = table or cls()
        for n in sorted(per):
            table.set_homology(n, per[n], tags[n])
        return table

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())

    @classmethod
    def load(cls, path: str | Path) -> "HomologyTable":
        return cls.from_jsonl(Path(path).read_text())


@dataclass
class DerivationStep:
    name: str
    n: int
    method: str
    inputs: tuple[str, ...]
    assertion: str
    facts: list[str] = field(default_factory=list)
    outcome: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        used = f" facts={','.join(self.facts)}" if self.facts else ""
        return f"{self.name}\t{self.method}\t{self.assertion}\t{self.outcome}{used}"


class DerivationError(RuntimeError):
    def __init__(self, step: DerivationStep, message: str, solutions: SolutionSet | None = None):
        super().__init__(f"{step.name}: {message}")
        self.step = step
        self.solutions = solutions


class AmbiguityError(DerivationError):
    def __init__(self, step: DerivationStep, solutions: SolutionSet, varying: list):
        names = ", ".join(f"{k}[{r}]{lam}" for k, r, lam in varying[:12])
        super().__init__(step, f"{len(solutions)} solutions; undetermined multiplicities: {names}", solutions)
        self.varying = varying


@dataclass
class Derivation:
    table: HomologyTable
    steps: list[DerivationStep]
    facts: FactRegistry
    added_facts: list[Fact] = field(default_factory=list)


# --- facts as constraints ---------------------------------------------------------


def _dimension_relations(d: int, n: int, facts: FactRegistry, labels, degrees: Iterable[int]) -> tuple[list[Relation], list[str]]:
    """gl_m dimension equalities for the strand through C_n.

    Recorded dims of K_{p,q} become relations directly; if exactly one degree
    of the strand is left unknown, the h-vector strand identity fixes it.
    """
    b, mdeg = n % d, n // d
    degrees = set(degrees)
    relations, used = [], []
    by_m: dict[int, dict[int, Fact]] = {}
    for f in facts.of_kind("koszul-dim"):
        p = f.params
        if p["d"] == d and p["b"] == b and p["p"] + p["q"] == mdeg:
            by_m.setdefault(p["m"], {})[p["p"] - 1] = f
    for m, known in sorted(by_m.items()):
        for r, f in sorted(known.items()):
            relations.append(gl_dimension_relation({r: 1}, m, f.value, labels, f.name))
            used.append(f.name)
        unknown = [r for r in degrees if r not in known]
        if len(unknown) == 1:
            (r,) = unknown
            total = strand_euler(h_vector(d, b, m), mdeg)
            rest = sum((-1) ** (s + 1) * f.value for s, f in known.items())
            value = (total - rest) * (-1) ** (r + 1)
            relations.append(gl_dimension_relation({r: 1}, m, value, labels, f"strand identity, m = {m}"))
    return relations, used


def _apply_facts(d: int, n: int, sys, facts: FactRegistry) -> list[str]:
    used = []
    degrees = {label[1] for label in sys.variables if label[0] == "x"}
    for f in facts.row_exclusions(d, n):
        r, cap = f.params["degree"], f.params["max_rows"]
        for label in sys.variables:
            if label[0] == "x" and label[1] == r and len(label[2]) <= cap:
                sys.fix(label, 0)
        used.append(f.name)
    for f in facts.row_caps(d, n):
        r, cap = f.params["degree"], f.params["max_rows"]
        for label in sys.variables:
            if label[0] == "x" and label[1] == r and len(label[2]) > cap:
                sys.fix(label, 0)
        used.append(f.name)
    for r in sorted(degrees):
        p, q, b = degree_to_pqb(n, r, d)
        for f in facts.multiplicities_for(d, b, p, q):
            lam = tuple(f.params["partition"])
            if f.params["m"] >= len(lam):
                sys.fix(("x", r, lam), f.value)
                used.append(f.name)
    return used


def _query_cost(d: int, n: int, r: int, lam) -> int:
    p, q, b = degree_to_pqb(n, r, d)
    return multiplicity_cost(tuple(lam), d, b, p, q)


def multiplicity_fact(d: int, n: int, r: int, lam, budget: int | None = MULTIPLICITY_BUDGET) -> Fact:
    """Compute the multiplicity of lam in H_r(C^d_n) as a recomputed fact."""
    p, q, b = degree_to_pqb(n, r, d)
    m = len(lam)
    value = koszul_multiplicity(tuple(lam), d, b, p, q, m=m, budget=budget)
    return Fact(
        name=f"mult{tuple(lam)}:K{p},{q}(V,{b}):m{m}".replace(" ", ""),
        kind="koszul-multiplicity",
        params={"partition": list(lam), "m": m, "d": d, "b": b, "p": p, "q": q},
        value=value,
        provenance="recomputed",
        citation="weight-space Koszul homology with Weyl alternation (koszul.koszul_multiplicity)",
    )


# --- the steps ---------------------------------------------------------------------


class _Runner:
    def __init__(self, d: int, facts: FactRegistry, resolve_missing: bool, progress: Callable[[str], None] | None):
        self.d = d
        self.facts = facts
        self.resolve_missing = resolve_missing
        self.progress = progress or (lambda s: None)
        self.table = HomologyTable(d=d)
        self.steps: list[DerivationStep] = []
        self.added: list[Fact] = []

    def begin(self, name: str, n: int, method: str, inputs: Iterable[str], assertion: str) -> DerivationStep:
        step = DerivationStep(name, n, method, tuple(inputs), assertion)
        step.seconds = time.perf_counter()
        return step

    def finish(self, step: DerivationStep, outcome: str) -> None:
        step.outcome = outcome
        step.seconds = round(time.perf_counter() - step.seconds, 3)
        self.steps.append(step)
        self.progress(step.line())

    def brute_force(self, n_min: int, n_max: int) -> None:
        for n in range(n_min, n_max + 1):
            step = self.begin(f"brute-force C_{n}", n, "equivariant_homology", [f"C^{self.d}_{n}"], "effective decomposition")
            h = homology_of(self.d, n, max_n=max(n_max, EQUIVARIANT_BUDGET_N))
            self.table.set_homology(n, h.entries, "brute-force")
            self.finish(step, _summary(h.entries))

    def les(self, n: int, name: str, rows=(2, 3), replay_of: dict | None = None) -> dict[int, VirtualRep]:
        d = self.d
        tables = self.table.as_tables()
        inputs = [f"H(C_{n - 1})", f"H(C_{n - d})"]
        known = {}
        for k in rows:
            pred = predicted_low_rows(tables, n, k)
            if pred is not None:
                known[k] = pred
                inputs.append(f"dual{k}")
        step = self.begin(name, n, "les_system + solve_nonneg", inputs, "unique solution")
        while True:
            sys = les_system(d, n, tables[n - 1], tables[n - d], known_low_rows=known)
            used = _apply_facts(d, n, sys, self.facts)
            degrees = {label[1] for label in sys.variables if label[0] == "x"}
            extra, dim_used = _dimension_relations(d, n, self.facts, sys.variables, degrees)
            step.facts = sorted(set(used + dim_used))
            sol = solve_nonneg(sys, extra=extra, max_solutions=64, max_nodes=2_000_000)
            reps = sol.distinct_representations()
            if not reps:
                raise DerivationError(step, "no solution: " + "; ".join(sys.infeasible[:3]), sol)
            if len(reps) == 1 and sol.complete:
                break
            varying = sorted(
                {v for v in sys.variables if v[0] == "x" and len({s.get(v, 0) for s in sol.solutions}) > 1}
            )
            if not varying or not self.resolve_missing:
                raise AmbiguityError(step, sol, varying)
            by_lam: dict = {}
            for v in varying:
                by_lam.setdefault(v[2], []).append(v[1])
            queries = sorted(
                (min((_query_cost(d, n, r, lam), r) for r in degs), lam) for lam, degs in by_lam.items()
            )
            affordable = [(r, lam) for (cost, r), lam in queries if cost <= MULTIPLICITY_BUDGET]
            if not affordable:
                raise AmbiguityError(step, sol, varying)
            log.warning("C_%d: %d solutions, computing %d multiplicities", n, len(reps), len(affordable))
            for r, lam in affordable:
                fact = multiplicity_fact(d, n, r, lam)
                self.facts.add(fact)
                self.added.append(fact)
                self.progress(f"  recomputed {fact.name} = {fact.value}")
        result = reps[0]
        if replay_of is not None:
            if {i: v for i, v in result.items() if v} != {i: v for i, v in replay_of.items() if v}:
                raise DerivationError(step, f"sequence gives {_summary(result)}, brute force {_summary(replay_of)}")
            self.finish(step, "agrees with brute force")
            return result
        tag = "external-fact-assisted" if step.facts else "les-derived"
        prov = {}
        for i, rep in result.items():
            fixed_all = all(sys.fixed.get(("x", i, lam)) == c for lam, c in rep.items())
            prov[i] = "duality" if fixed_all and tag == "les-derived" else tag
        self.table.set_homology(n, result, prov)
        self.finish(step, _summary(result))
        return result

    def check(self, name: str, n: int, assertion: str, ok: bool, outcome: str) -> None:
        step = self.begin(name, n, "check", [], assertion)
        if not ok:
            raise DerivationError(step, outcome)
        self.finish(step, outcome)


def _summary(reps: Mapping[int, VirtualRep]) -> str:
    parts = [f"H_{i}: {len(v)} terms" for i, v in sorted(reps.items()) if v]
    return ", ".join(parts) if parts else "all zero"


def derive_all(
    d: int = 3,
    n_max: int = 24,
    facts: FactRegistry | None = None,
    brute_max: int = 10,
    replay_from: int = 7,
    resolve_missing: bool = False,
    progress: Callable[[str], None] | None = None,
) -> Derivation:
    """Run every step up to ``n_max``; see the module docstring."""
    if d != 3 and n_max > brute_max:
        raise ValueError("the scripted derivation beyond brute force is written for d = 3")
    facts = facts if facts is not None else FactRegistry()
    run = _Runner(d, facts, resolve_missing, progress)
    run.brute_force(0, min(brute_max, n_max))
    for n in range(max(replay_from, 2 * d), min(brute_max, n_max) + 1):
        saved = run.table.homology(n)
        run.table.covered.discard(n)
        try:
            run.les(n, f"sequence replay C_{n}", rows=(2,), replay_of=saved)
        finally:
            run.table.covered.add(n)
    for n in range(brute_max + 1, n_max + 1):
        rows = (2,) if n <= 13 else (2, 3)
        run.les(n, f"sequence C_{n}", rows=rows)
    if n_max >= 24 and d == 3:
        h24 = run.table.homology(24)
        run.check(
            "final assertion C_24",
            24,
            "only H_6 is nonzero",
            set(h24) == {6},
            f"nonzero degrees {sorted(h24)}",
        )
    return Derivation(run.table, run.steps, facts, run.added)


# --- closure checks ----------------------------------------------------------------


def duality_closure(table: HomologyTable) -> list[str]:
    tables = table.as_tables()
    problems = duality_violations({n: t for n, t in tables.items() if n <= 10}, 2)
    problems += duality_violations(tables, 3)
    return problems


def dimension_closure(table: HomologyTable, m: int = 2, budget: int = 20_000) -> list[str]:
    """Compare dim_gl predictions with direct Koszul dims wherever feasible."""
    problems = []
    d = table.d
    for n in sorted(table.covered):
        if n < d:
            continue
        for r in range(-1, n // d):
            p, q, b = degree_to_pqb(n, r, d)
            if p < 0 or q < 0:
                continue
            try:
                direct = koszul_dim_direct(m, d, b, p, q, budget=budget)
            except InfeasibleAtDeskScale:
                continue
            predicted = trans_dim_check(table.get(n, r), m)
            if predicted != direct:
                problems.append(f"C_{n} degree {r}: dim_gl{m} {predicted} != K_{p},{q}(V,{b}) = {direct}")
    return problems


def concentration_check(table: HomologyTable, max_k: int = 8) -> list[str]:
    """For n = 3k >= 6 the only nonzero degree must be k - 2 (C_3 is a point)."""
    problems = []
    for k in range(2, max_k + 1):
        n = table.d * k
        if n not in table.covered:
            continue
        degrees = sorted(table.homology(n))
        if degrees != [k - 2]:
            problems.append(f"C_{n}: nonzero degrees {degrees}, expected [{k - 2}]")
    return problems


# --- checking against the printed values -------------------------------------------


def golden() -> dict:
    return json.loads((resources.files("matching_homology") / "data" / "golden.json").read_text())


@dataclass
class VerifyReport:
    matches: list[str] = field(default_factory=list)
    mismatches: list[str] = field(default_factory=list)
    missing: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.missing

    def lines(self) -> list[str]:
        out = [f"MATCH\t{m}" for m in self.matches]
        out += [f"MISMATCH\t{m}" for m in self.mismatches]
        if self.missing:
            out.append(f"INCOMPLETE\tmissing n = {','.join(map(str, self.missing))}")
        return out


def _rep(n: int, records) -> VirtualRep:
    return VirtualRep(n, {from_json(r["partition"]): r["mult"] for r in records})


def _diff(got: VirtualRep, want: VirtualRep) -> str:
    extra = got - want
    parts = []
    plus = VirtualRep(got.n, {k: v for k, v in extra.items() if v > 0})
    minus = VirtualRep(got.n, {k: -v for k, v in extra.items() if v < 0})
    if plus:
        parts.append(f"extra {plus}")
    if minus:
        parts.append(f"missing {minus}")
    return "; ".join(parts)


def verify_paper(table: HomologyTable, fixtures: dict | None = None) -> VerifyReport:
    g = fixtures or golden()
    report = VerifyReport()
    full = g["full"]
    needed = set(range(full["n_min"], full["n_max"] + 1))
    needed |= {int(n) for n in g["support"]}
    needed |= {e["n"] for e in g["partial"]}
    report.missing = sorted(needed - table.covered)

    printed: dict[int, dict[int, VirtualRep]] = {}
    for e in full["entries"]:
        printed.setdefault(e["n"], {})[e["i"]] = _rep(e["n"], e["rep"])
    for n in range(full["n_min"], full["n_max"] + 1):
        if n not in table.covered:
            continue
        got = table.homology(n)
        for i in sorted(set(got) | set(printed.get(n, {}))):
            want = printed.get(n, {}).get(i, VirtualRep(n))
            have = got.get(i, VirtualRep(n))
            if have == want:
                report.matches.append(f"({n},{i}) {have if have else 0}")
            else:
                report.mismatches.append(f"({n},{i}) {_diff(have, want)}")

    for e in g["partial"]:
        n, i = e["n"], e["i"]
        if n not in table.covered:
            continue
        want, have = _rep(n, e["rep"]), table.get(n, i)
        if have == want:
            report.matches.append(f"({n},{i}) {have}")
        else:
            report.mismatches.append(f"({n},{i}) {_diff(have, want)}")

    for n_text, degrees in sorted(g["support"].items(), key=lambda kv: int(kv[0])):
        n = int(n_text)
        if n not in table.covered:
            continue
        got = sorted(table.homology(n))
        tag = f"support C_{n}"
        (report.matches if got == degrees else report.mismatches).append(f"{tag} {got}" + ("" if got == degrees else f" expected {degrees}"))

    for block in g["low_rows"]:
        k = block["rows"]
        groups = {tuple(x) for x in block["groups"]}
        for n in range(block["n_min"], block["n_max"] + 1):
            if n not in table.covered:
                continue
            for i, rep in table.homology(n).items():
                low = VirtualRep(n, {lam: c for lam, c in rep.items() if len(lam) <= k})
                if bool(low) != ((n, i) in groups):
                    report.mismatches.append(f"rows<={k} part of ({n},{i}) is {low if low else 0}")
            for grp in sorted(groups):
                if grp[0] == n and not any(len(lam) <= k for lam in table.get(*grp)):
                    report.mismatches.append(f"rows<={k} part of {grp} is 0, expected nonzero")
        for e in block["explicit"]:
            n, i = e["n"], e["i"]
            if n not in table.covered:
                continue
            have = VirtualRep(n, {lam: c for lam, c in table.get(n, i).items() if len(lam) <= k})
            want = _rep(n, e["rep"])
            if have == want:
                report.matches.append(f"rows<={k} part of ({n},{i}) {have}")
            else:
                report.mismatches.append(f"rows<={k} part of ({n},{i}) {_diff(have, want)}")
    return report


def golden_table() -> HomologyTable:
    """The fully printed range as a table (n = 4..13)."""
    g = golden()["full"]
    per: dict[int, dict[int, VirtualRep]] = {n: {} for n in range(g["n_min"], g["n_max"] + 1)}
    for e in g["entries"]:
        per[e["n"]][e["i"]] = _rep(e["n"], e["rep"])
    table = HomologyTable(d=3)
    for n, reps in per.items():
        table.set_homology(n, reps, "les-derived")
    return table
