import random
from itertools import combinations
from math import comb

import pytest

from matching_homology.complexes import (
    act_on_face,
    action_matrix,
    boundary_matrix,
    build_matching_complex,
    dump_faces,
    sort_sign,
)
from matching_homology.linalg import SparseExactMatrix


def _compose(s, t):
    # (s t)(x) = s(t(x))
    return tuple(s[t[x]] for x in range(len(t)))


@pytest.mark.parametrize(
    "n, f",
    [(4, [4]), (6, [20, 10]), (9, [84, 840, 280])],
)
def test_f_vectors(n, f):
    assert build_matching_complex(3, n).f_vector() == f


def test_small_and_empty_complexes():
    cx = build_matching_complex(3, 2)
    assert cx.f_vector() == [] and cx.faces[-1] == [()]
    # -1 + 20 - 10, counting the empty face in degree -1
    assert build_matching_complex(3, 6).reduced_euler_characteristic() == 9
    with pytest.raises(ValueError):
        build_matching_complex(1, 4)


@pytest.mark.parametrize("n", range(3, 13))
def test_face_counts_match_closed_formula(n):
    cx = build_matching_complex(3, n)
    for r, count in enumerate(cx.f_vector()):
        k = r + 1
        expected = 1
        for j in range(k):
            expected *= comb(n - 3 * j, 3)
        for j in range(1, k + 1):
            expected //= j
        assert count == expected
        assert len(set(cx.faces[r])) == count
        assert cx.faces[r] == sorted(cx.faces[r])


@pytest.mark.parametrize("n", range(3, 11))
def test_boundary_squares_to_zero(n):
    cx = build_matching_complex(3, n)
    for r in range(1, cx.r_max + 1):
        prod = boundary_matrix(cx, r - 1) @ boundary_matrix(cx, r)
        assert not prod.entries


def test_boundary_conventions():
    cx = build_matching_complex(3, 6)
    aug = boundary_matrix(cx, 0)
    assert aug.rows == 1 and set(aug.entries.values()) == {1} and len(aug.entries) == 20
    d1 = boundary_matrix(cx, 1)
    for j, (a, b) in enumerate(cx.faces[1]):
        assert d1.entries[(cx.index[0][(b,)], j)] == 1
        assert d1.entries[(cx.index[0][(a,)], j)] == -1
    with pytest.raises(ValueError):
        boundary_matrix(cx, 5)
    assert build_matching_complex(3, 6, reduced=False).f_vector() == [20, 10]


@pytest.mark.parametrize("n", range(6, 10))
def test_equivariance_and_homomorphism(n):
    rng = random.Random(n)
    cx = build_matching_complex(3, n)
    for _ in range(3):
        s = tuple(rng.sample(range(n), n))
        t = tuple(rng.sample(range(n), n))
        for r in cx.degrees():
            if r > cx.r_max:
                continue
            ms, mt = action_matrix(cx, r, s), action_matrix(cx, r, t)
            assert action_matrix(cx, r, _compose(s, t)) == ms @ mt
            if r >= 0:
                d = boundary_matrix(cx, r)
                assert action_matrix(cx, r - 1, s) @ d == d @ ms


def test_action_signs():
    cx = build_matching_complex(3, 6)
    ident = tuple(range(6))
    assert action_matrix(cx, 1, ident) == SparseExactMatrix.identity(10)
    edge = ((0, 1, 2), (3, 4, 5))
    assert act_on_face(edge, (1, 0, 2, 3, 4, 5)) == (edge, 1)
    assert act_on_face(edge, (3, 4, 5, 0, 1, 2)) == (edge, -1)
    with pytest.raises(ValueError):
        action_matrix(cx, 1, (0, 0, 1, 2, 3, 4))


def test_sort_sign():
    assert sort_sign([3, 1, 2]) == ((1, 2, 3), 1)
    assert sort_sign([2, 1, 3]) == ((1, 2, 3), -1)
    assert sort_sign([]) == ((), 1)


def test_d2_perfect_matching_complex_of_k4():
    # three disjoint-pair edges {12|34}, {13|24}, {14|23}; no other pairs are disjoint
    cx = build_matching_complex(2, 4)
    assert cx.f_vector() == [6, 3]
    pairs = list(combinations(range(4), 2))
    hand = sorted(tuple(sorted((a, b))) for a, b in combinations(pairs, 2) if not set(a) & set(b))
    assert cx.faces[1] == hand


def test_dump_faces_format():
    text = dump_faces(build_matching_complex(3, 6))
    lines = text.splitlines()
    assert len(lines) == 30
    assert lines[0] == "123" and "123 456" in lines
    wide = dump_faces(build_matching_complex(3, 10)).splitlines()
    assert "1,2,3 4,5,6 7,8,9" in wide
