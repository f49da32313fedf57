import json
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matching_homology.branching import VirtualRep, induce_trivial_strip, restrict, vr_dim_sn
from matching_homology.les_solver import (
    ConstraintSystem,
    appendix_system,
    candidate_partitions,
    les_bounds,
    les_system,
    relation,
    restriction_sandwich,
    solve_nonneg,
    verify_solution,
)
from matching_homology.partitions import enumerate_partitions, remove_box
from matching_homology.pipeline import golden_table


@pytest.fixture(scope="module")
def printed():
    t = golden_table()
    return {n: (t.homology(n) if n >= 4 else {}) for n in range(0, 14)}


def _with_small(brute_tables, printed):
    out = dict(printed)
    for n in range(0, 4):
        out[n] = brute_tables[n].entries
    return out


def test_bounds_at_n8(brute_tables):
    b = les_bounds(3, 8, brute_tables[7].entries, brute_tables[5].entries)
    expected = brute_tables[7].get(1) + induce_trivial_strip(brute_tables[5].get(0), 2)
    assert set(b) == {1}
    assert b[1] == (expected, expected)


def test_bounds_at_n7(brute_tables):
    b = les_bounds(3, 7, brute_tables[6].entries, brute_tables[4].entries)
    ind = induce_trivial_strip(brute_tables[4].get(0), 2)
    assert b[1][1] == ind
    assert b[1][0] == ind - brute_tables[6].get(0)


@pytest.mark.parametrize("n", range(6, 14))
def test_printed_tables_satisfy_their_bounds(brute_tables, printed, n):
    tables = _with_small(brute_tables, printed)
    bounds = les_bounds(3, n, tables[n - 1], tables[n - 3])
    for r, rep in tables[n].items():
        lower, upper = bounds[r]
        assert restriction_sandwich(rep, lower, upper), (n, r)
        assert vr_dim_sn(lower) <= vr_dim_sn(restrict(rep)) <= vr_dim_sn(upper)
    assert set(bounds) >= set(tables[n])


def test_candidate_partitions():
    assert candidate_partitions(restrict(VirtualRep.of((5, 5)))) == [(5, 5)]
    assert candidate_partitions(VirtualRep(9)) == []
    upper = VirtualRep.of((6, 4), (7, 3), (6, 3, 1), (7, 2, 1), (6, 4), (5, 4, 1))
    found = candidate_partitions(upper)
    assert (6, 4, 1) in found and (7, 3, 1) in found


def test_unique_solution_at_n7(brute_tables):
    sys = les_system(3, 7, brute_tables[6].entries, brute_tables[4].entries)
    sols = solve_nonneg(sys)
    assert sols.complete
    assert sols.distinct_representations() == [{1: VirtualRep.of((5, 1, 1), (3, 3, 1))}]


def test_unique_solution_at_n12(printed):
    # at n = 12 the two-row partner 10 - 12 is negative, so no two-row summands occur
    sys = les_system(3, 12, printed[11], printed[9], known_low_rows={2: {}})
    sols = solve_nonneg(sys)
    reps = sols.distinct_representations()
    assert sols.complete and len(reps) == 1
    assert reps[0] == printed[12]
    assert len(reps[0][2]) == 14


def test_contradictory_system_is_empty():
    sys = ConstraintSystem(3)
    a, b = ("x", 0, (3,)), ("x", 0, (2, 1))
    sys.add_variable(a, 2)
    sys.add_variable(b, 2)
    sys.relations.append(relation({a: 1, b: 1}, "=", 3))
    sys.relations.append(relation({a: 1}, "<=", 0))
    assert len(solve_nonneg(sys)) == 0
    sys2 = ConstraintSystem(3)
    sys2.fix(a, 1)
    assert sys2.infeasible and len(solve_nonneg(sys2)) == 0


small_uppers = st.dictionaries(st.sampled_from(enumerate_partitions(4)), st.integers(1, 2), min_size=1, max_size=5).map(
    lambda d: VirtualRep(4, d)
)


@settings(max_examples=40)
@given(small_uppers, st.data())
def test_completeness_against_enumeration(upper, data):
    lower = VirtualRep(4, {mu: data.draw(st.integers(0, c)) for mu, c in upper.items()})
    sys = appendix_system(0, lower, upper)
    got = {tuple(sorted(s.items())) for s in solve_nonneg(sys).solutions}
    # enumerate every effective X of S_5 with multiplicities up to 2 directly
    parts = enumerate_partitions(5)
    brute = set()
    for mults in product(range(3), repeat=len(parts)):
        x = VirtualRep(5, {lam: c for lam, c in zip(parts, mults) if c})
        if restriction_sandwich(x, lower, upper):
            brute.add(tuple(sorted((("x", 0, lam), c) for lam, c in x.items())))
    assert got == brute
    for s in solve_nonneg(sys).solutions:
        assert verify_solution(sys, s)


def test_serialization_round_trip(brute_tables):
    sys = les_system(3, 8, brute_tables[7].entries, brute_tables[5].entries)
    back = ConstraintSystem.from_json(json.loads(sys.dumps()))
    assert back.variables == sys.variables and back.relations == sys.relations and back.upper == sys.upper
    sols = solve_nonneg(back)
    data = sols.to_json()
    assert data["complete"] and len(data["solutions"]) == 1
    assert VirtualRep.from_records(8, data["solutions"][0]["1"]) == brute_tables[8].get(1)


def test_relation_validation():
    with pytest.raises(ValueError):
        relation({}, "<", 0)
    r = relation([(("x", 0, (1,)), 1), (("x", 0, (1,)), -1)], "=", 0)
    assert r.coeffs == ()
