import copy

import pytest

from matching_homology.branching import VirtualRep
from matching_homology.facts import FactRegistry, default_registry
from matching_homology.pipeline import (
    AmbiguityError,
    HomologyTable,
    concentration_check,
    derive_all,
    dimension_closure,
    duality_closure,
    golden,
    golden_table,
    multiplicity_fact,
    verify_paper,
)


def _copy(table: HomologyTable) -> HomologyTable:
    return HomologyTable.from_jsonl(table.to_jsonl())


def test_jsonl_record_format():
    t = HomologyTable(d=3)
    t.set_homology(7, {1: VirtualRep.of((5, 1, 1), (3, 3, 1))}, "brute-force")
    assert t.to_jsonl() == (
        '{"d":3,"n":7,"i":1,"rep":[{"partition":[5,1,1],"mult":1},'
        '{"partition":[3,3,1],"mult":1}],"provenance":"brute-force"}\n'
    )


def test_table_validation():
    t = HomologyTable()
    with pytest.raises(ValueError):
        t.set_homology(4, {0: VirtualRep(4, {(3, 1): -1})}, "brute-force")
    with pytest.raises(ValueError):
        t.set_homology(4, {0: VirtualRep.of((3, 1))}, "guessed")
    with pytest.raises(KeyError):
        t.homology(4)


def test_round_trip_is_byte_stable(derivation, tmp_path):
    path = tmp_path / "table.jsonl"
    derivation.table.save(path)
    back = HomologyTable.load(path)
    assert back.to_jsonl() == derivation.table.to_jsonl()
    assert back.entries == derivation.table.entries


def test_derivation_reproduces_printed_values(derivation):
    report = verify_paper(derivation.table)
    assert report.mismatches == [] and report.missing == []
    assert report.ok


def test_derivation_steps_are_recorded(derivation):
    names = [s.name for s in derivation.steps]
    assert names[0] == "brute-force C_0"
    assert "sequence replay C_7" in names and "sequence C_24" in names
    assert names[-1] == "final assertion C_24"
    assert all(s.outcome for s in derivation.steps)
    by_name = {s.name: s for s in derivation.steps}
    assert "N6:nu3(P3)" in by_name["sequence C_24"].facts
    assert "K6,0(V,2):m4" in by_name["sequence C_20"].facts
    assert "K7,0(V,2):m4" in by_name["sequence C_23"].facts


def test_final_table_shape(derivation):
    t = derivation.table
    assert t.homology(24).keys() == {6}
    assert t.get(24, 5) == VirtualRep(24)
    assert t.get(13, 3) == VirtualRep.of((9, 1, 1, 1, 1), (7, 3, 1, 1, 1), (5, 5, 1, 1, 1), (5, 3, 3, 1, 1), (3, 3, 3, 3, 1))
    assert all(rep.is_effective() for rep in t.entries.values())
    assert {t.provenance[(n, i)] for (n, i) in t.entries if n <= 10} == {"brute-force"}
    assert t.provenance[(20, 4)] == "external-fact-assisted"


def test_closure_checks(derivation):
    assert duality_closure(derivation.table) == []
    assert concentration_check(derivation.table) == []
    assert dimension_closure(derivation.table, m=2) == []


def test_fault_injection_names_the_entry(derivation):
    t = _copy(derivation.table)
    t.set_homology(10, {2: t.get(10, 2)}, "brute-force")
    report = verify_paper(t)
    assert not report.ok
    assert report.mismatches[0] == "(10,1) missing (5,5)"
    assert all("(10, 1)" in m or "(10,1)" in m for m in report.mismatches)


def test_missing_entry_is_incomplete():
    report = verify_paper(golden_table())
    assert report.mismatches == []
    assert 23 in report.missing and 20 in report.missing
    assert report.lines()[-1].startswith("INCOMPLETE")


def test_ambiguity_without_facts_at_n17():
    reg = FactRegistry(f for f in default_registry() if f.kind != "koszul-multiplicity")
    with pytest.raises(AmbiguityError) as err:
        derive_all(n_max=17, facts=reg)
    assert err.value.step.n == 17
    assert any(lam == (8, 5, 3, 1) for _, _, lam in err.value.varying)


def test_missing_facts_are_recomputed_on_request():
    reg = FactRegistry(f for f in default_registry() if f.kind != "koszul-multiplicity")
    run = derive_all(n_max=17, facts=reg, resolve_missing=True)
    # the cheaper of the two degrees is queried: H_4 of C_17, i.e. K_{5,0}(V,2)
    assert [f.name for f in run.added_facts] == ["mult(8,5,3,1):K5,0(V,2):m4"]
    reference = derive_all(n_max=17, facts=default_registry()).table
    assert run.added_facts[0].value == reference.get(17, 4).get((8, 5, 3, 1))
    assert run.table.homology(17) == reference.homology(17)


def test_multiplicity_fact_matches_brute_force(brute_tables):
    f = multiplicity_fact(3, 10, 1, (5, 5))
    assert f.value == brute_tables[10].get(1).get((5, 5)) == 1
    assert f.provenance == "recomputed"


def test_golden_fixture_is_self_consistent():
    g = golden()
    assert {e["n"] for e in g["full"]["entries"]} == set(range(4, 14))
    partial = {(e["n"], e["i"]) for e in g["partial"]}
    assert partial == {(20, 4), (23, 5)}
    assert [len(e["rep"]) for e in g["partial"] if e["n"] == 23] == [12]


@pytest.mark.slow
@pytest.mark.parametrize("lam", [(11, 7, 2, 2, 1), (11, 6, 4, 1, 1), (10, 7, 4, 1, 1)])
def test_row_cap_at_n23_agrees_with_recomputation(derivation, lam):
    # these partitions could sit in both H_5 and H_6 of C_23 without the row cap;
    # the recomputed H_6 multiplicity rules the alternative out
    f = multiplicity_fact(3, 23, 6, lam)
    assert f.value == derivation.table.get(23, 6).get(lam)
