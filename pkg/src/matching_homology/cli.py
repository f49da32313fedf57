"""Command line entry point.

Exit codes: 0 success, 1 mismatch or ambiguity, 2 computation over budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .complexes import build_matching_complex, dump_faces
from .facts import FactRegistry, default_registry, default_registry_path, recompute
from .homology import BETTI_BUDGET_N, EQUIVARIANT_BUDGET_N, BudgetExceeded, betti_numbers, equivariant_homology
from .koszul import DIRECT_BUDGET, InfeasibleAtDeskScale, h_vector, koszul_dim_direct, strand_euler
from .les_solver import ConstraintSystem, solve_nonneg
from .pipeline import (
    AmbiguityError,
    DerivationError,
    HomologyTable,
    derive_all,
    dimension_closure,
    duality_closure,
    verify_paper,
)

OK, MISMATCH, OVER_BUDGET = 0, 1, 2


def _print(line: str = "") -> None:
    print(line, flush=True)


def cmd_homology(args) -> int:
    budget = args.max_n if args.max_n is not None else (EQUIVARIANT_BUDGET_N if args.equivariant else BETTI_BUDGET_N)
    if args.n > budget and not args.dump_faces:
        _print(f"n = {args.n} exceeds the budget n <= {budget} (raise with --max-n)")
        return OVER_BUDGET
    cx = build_matching_complex(args.d, args.n)
    if args.dump_faces:
        sys.stdout.write(dump_faces(cx))
        return OK
    _print(f"f-vector\t{cx.f_vector()}")
    _print(f"reduced Euler characteristic\t{cx.reduced_euler_characteristic()}")
    if args.equivariant:
        h = equivariant_homology(cx, max_n=budget)
        for i, rep in sorted(h.entries.items()):
            _print(f"H_{i}\t{h.betti[i]}\t{rep}")
    else:
        for i, b in sorted(betti_numbers(cx).items()):
            _print(f"H_{i}\t{b}")
    return OK


def _load_facts(path) -> FactRegistry:
    return FactRegistry.load(path) if path else default_registry()


def cmd_pipeline(args) -> int:
    facts = _load_facts(args.facts)
    if args.recompute_facts:
        for fact in facts:
            if not fact.recomputable:
                continue
            value = recompute(fact, budget=args.fact_budget)
            status = "ok" if value == fact.value else "MISMATCH"
            _print(f"fact\t{fact.name}\t{fact.provenance}\tstored={fact.value}\trecomputed={value}\t{status}")
            if value != fact.value:
                return MISMATCH
    try:
        result = derive_all(
            d=args.d, n_max=args.max_n, facts=facts, resolve_missing=args.resolve_missing, progress=_print
        )
    except AmbiguityError as err:
        _print(f"AMBIGUOUS\t{err}")
        if err.solutions is not None:
            _print(json.dumps(err.solutions.to_json()))
        return MISMATCH
    except DerivationError as err:
        _print(f"FAILED\t{err}")
        return MISMATCH
    table = result.table
    problems = duality_closure(table) + dimension_closure(table)
    for p in problems:
        _print(f"CLOSURE\t{p}")
    if args.out:
        table.save(args.out)
        _print(f"table written to {args.out}")
    if result.added_facts and args.save_facts:
        result.facts.save(args.save_facts)
        _print(f"{len(result.added_facts)} new facts written to {args.save_facts}")
    if args.report:
        from .report import render_report

        for path in render_report(table, args.report, result.steps):
            _print(f"report\t{path}")
    return MISMATCH if problems else OK


def cmd_verify(args) -> int:
    if args.table:
        table = HomologyTable.load(args.table)
    else:
        try:
            table = derive_all(facts=_load_facts(args.facts)).table
        except DerivationError as err:
            _print(f"FAILED\t{err}")
            return MISMATCH
    report = verify_paper(table)
    for line in report.lines():
        _print(line)
    _print(f"{len(report.matches)} matches, {len(report.mismatches)} mismatches")
    return OK if report.ok else MISMATCH


def cmd_koszul(args) -> int:
    try:
        value = koszul_dim_direct(args.m, args.d, args.b, args.p, args.q, budget=args.budget)
    except InfeasibleAtDeskScale as err:
        _print(str(err))
        return OVER_BUDGET
    _print(f"dim K_{args.p},{args.q}(V,{args.b})\tm={args.m}\td={args.d}\t{value}")
    if 0 <= args.b < args.d:
        hd = h_vector(args.d, args.b, args.m)
        _print(f"h-vector\t{list(hd.h)}\tcodim\t{hd.codim}")
        _print(f"strand sum at p+q={args.p + args.q}\t{strand_euler(hd, args.p + args.q)}")
    return OK


def cmd_solve(args) -> int:
    system = ConstraintSystem.from_json(json.loads(Path(args.system).read_text()))
    sol = solve_nonneg(system, max_solutions=args.max_solutions, max_nodes=args.max_nodes)
    _print(json.dumps(sol.to_json()))
    if not sol.complete:
        return OVER_BUDGET
    return OK if len(sol.distinct_representations()) == 1 else MISMATCH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="matching-homology", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    h = sub.add_parser("homology", help="homology of one matching complex")
    h.add_argument("--d", type=int, required=True)
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--equivariant", action="store_true", help="decompose into Specht modules")
    h.add_argument("--dump-faces", action="store_true")
    h.add_argument("--max-n", type=int, default=None, help="override the size budget")
    h.set_defaults(func=cmd_homology)

    p = sub.add_parser("pipeline", help="derive every table entry up to --max-n")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--max-n", type=int, default=24)
    p.add_argument("--facts", type=Path, default=None, help=f"facts registry (default {default_registry_path().name})")
    p.add_argument("--recompute-facts", action="store_true", help="recompute every Koszul fact first (slow)")
    p.add_argument("--fact-budget", type=int, default=None, help="middle-term cap while recomputing facts")
    p.add_argument("--resolve-missing", action="store_true", help="compute missing multiplicities instead of aborting")
    p.add_argument("--save-facts", type=Path, default=None)
    p.add_argument("--out", type=Path, default=None, help="write the table as JSON lines")
    p.add_argument("--report", type=Path, default=None, help="directory for homology.tsv and figures")
    p.set_defaults(func=cmd_pipeline)

    v = sub.add_parser("verify-paper", help="compare a table with the printed values")
    v.add_argument("--table", type=Path, default=None)
    v.add_argument("--facts", type=Path, default=None)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("koszul", help="dim K_{p,q}(V,b) by direct computation")
    for name in ("m", "d", "b", "p", "q"):
        k.add_argument(f"--{name}", type=int, required=True)
    k.add_argument("--budget", type=int, default=DIRECT_BUDGET)
    k.set_defaults(func=cmd_koszul)

    s = sub.add_parser("solve", help="solve a serialized constraint system")
    s.add_argument("--system", type=Path, required=True)
    s.add_argument("--max-solutions", type=int, default=1000)
    s.add_argument("--max-nodes", type=int, default=2_000_000)
    s.set_defaults(func=cmd_solve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (BudgetExceeded, InfeasibleAtDeskScale) as err:
        _print(str(err))
        return OVER_BUDGET


if __name__ == "__main__":
    sys.exit(main())
