import pytest
from hypothesis import given
from hypothesis import strategies as st

from matching_homology.branching import VirtualRep
from matching_homology.duality import (
    DualityDomainError,
    degree_to_pqb,
    dual2,
    dual3,
    duality_violations,
    low_row_table,
    pqb_to_degree,
    predicted_low_rows,
)
from matching_homology.partitions import enumerate_partitions
from matching_homology.pipeline import golden_table


def _domain(rows, box, n_max):
    return [
        lam
        for n in range(0, n_max + 1)
        for lam in enumerate_partitions(n, max_rows=rows)
        if not lam or lam[0] <= box
    ]


def test_dual2_examples():
    img = dual2((3, 1), 1, 4)
    assert (img.partition, img.degree, img.N, img.vacuous) == ((4, 2), 0, 6, False)
    assert dual2((5, 5), 2, 10).partition == ()
    img = dual2((5, 3), 2, 8)
    assert (img.partition, img.degree, img.N) == ((2,), -1, 2)
    assert not img.vacuous  # H_{-1}(C_2) is the trivial representation, a real constraint


def test_dual3_examples():
    img = dual3((5, 5), 2, 10)
    assert (img.partition, img.degree, img.N) == ((9, 4, 4), 4, 17)
    img = dual3((9, 8, 6), 6, 23)
    assert (img.partition, img.degree, img.N) == ((3, 1), 0, 4)
    assert dual3((9, 9, 9), 5, 27).partition == ()


def test_domain_errors():
    with pytest.raises(DualityDomainError):
        dual2((6,), 1, 6)
    with pytest.raises(DualityDomainError):
        dual2((2, 1, 1), 1, 4)
    with pytest.raises(DualityDomainError):
        dual3((10,), 1, 10)


@given(st.sampled_from(_domain(2, 5, 10)), st.integers(-1, 4))
def test_dual2_involution(lam, p):
    N = sum(lam)
    a = dual2(lam, p, N)
    assert sum(a.partition) == a.N
    b = dual2(a.partition, a.p, a.N)
    assert (b.partition, b.p, b.N) == (lam, p, N)


@given(st.sampled_from(_domain(3, 9, 27)), st.integers(-1, 8))
def test_dual3_involution(lam, p):
    N = sum(lam)
    a = dual3(lam, p, N)
    assert len(a.partition) <= 3 and sum(a.partition) == a.N
    b = dual3(a.partition, a.p, a.N)
    assert (b.partition, b.p, b.N) == (lam, p, N)


@given(st.integers(0, 40), st.integers(-1, 12))
def test_degree_bookkeeping_round_trip(N, degree):
    p, q, b = degree_to_pqb(N, degree)
    assert 0 <= b < 3
    assert pqb_to_degree(p, q, b) == (N, degree)


@pytest.fixture(scope="module")
def printed(brute_tables):
    t = golden_table()
    out = {n: t.homology(n) for n in range(4, 14)}
    out.update({n: brute_tables[n].entries for n in range(0, 4)})
    return out


def test_printed_tables_are_self_dual(printed):
    assert duality_violations(printed, 2) == []


def test_low_row_table(printed):
    low = low_row_table(printed)
    assert low[(20, 4)] == VirtualRep.of((8, 8, 4), (8, 6, 6))
    assert low[(23, 5)] == VirtualRep.of((9, 8, 6))
    assert [i for (n, i) in low if n == 14] == [3]
    assert all(len(lam) <= 3 for rep in low.values() for lam in rep)


def test_predicted_low_rows_edge_cases(printed):
    assert predicted_low_rows(printed, 12, 2) == {}
    assert predicted_low_rows(printed, 20, 3) is not None
    assert predicted_low_rows({}, 20, 3) is None
    with pytest.raises(ValueError):
        low_row_table({}, range(14, 15))


def test_violation_is_reported(printed):
    broken = dict(printed)
    broken[10] = {2: printed[10][2], 1: VirtualRep.of((6, 4))}
    assert duality_violations(broken, 2)
