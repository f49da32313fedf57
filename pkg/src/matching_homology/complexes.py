"""Matching complexes C^d_n with oriented faces and the signed S_n action.

Ground set is {0, ..., n-1}.  A block is a sorted d-tuple; a face is a tuple
of pairwise disjoint blocks ordered by their minimum element (equivalently,
lexicographically).  In reduced mode the empty face sits in degree -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .linalg import SparseExactMatrix

Block = tuple[int, ...]
Face = tuple[Block, ...]


@dataclass
class MatchingComplexChain:
    d: int
    n: int
    reduced: bool = True
    faces: dict[int, list[Face]] = field(default_factory=dict)
    index: dict[int, dict[Face, int]] = field(default_factory=dict)

    @property
    def r_max(self) -> int:
        return self.n // self.d - 1

    def degrees(self) -> range:
        return range(-1 if self.reduced else 0, self.r_max + 1)

    def f_vector(self) -> list[int]:
        return [len(self.faces.get(r, [])) for r in range(0, self.r_max + 1)]

    def reduced_euler_characteristic(self) -> int:
        return sum((-1 if r % 2 else 1) * len(self.faces[r]) for r in self.degrees())

    def dim(self, r: int) -> int:
        return len(self.faces.get(r, []))


def build_matching_complex(d: int, n: int, reduced: bool = True) -> MatchingComplexChain:
    """Enumerate all faces, growing each face only by blocks of larger index."""
    if d < 2:
        raise ValueError("block size d must be at least 2")
    blocks = list(combinations(range(n), d))
    cx = MatchingComplexChain(d=d, n=n, reduced=reduced)
    for r in range(-1, n // d):
        cx.faces[r] = []
    if not reduced:
        del cx.faces[-1]
    else:
        cx.faces[-1].append(())

    def grow(start: int, used: frozenset, face: list[Block]) -> None:
        for k in range(start, len(blocks)):
            b = blocks[k]
            if used.isdisjoint(b):
                face.append(b)
                cx.faces[len(face) - 1].append(tuple(face))
                grow(k + 1, used | set(b), face)
                face.pop()

    grow(0, frozenset(), [])
    for r, fs in cx.faces.items():
        fs.sort()
        cx.index[r] = {f: i for i, f in enumerate(fs)}
    return cx


def boundary_matrix(cx: MatchingComplexChain, r: int) -> SparseExactMatrix:
    """Simplicial boundary from degree r to r-1: drop block i with sign (-1)^i.

    For r = 0 in reduced mode this is the augmentation (all-ones row).
    """
    lo = -1 if cx.reduced else 0
    if r == lo:
        return SparseExactMatrix(0, len(cx.faces[r]))
    if not lo < r <= cx.r_max:
        raise ValueError(f"degree {r} outside {lo}..{cx.r_max}")
    src, dst = cx.faces[r], cx.index[r - 1]
    entries = {}
    for j, face in enumerate(src):
        for i in range(len(face)):
            entries[(dst[face[:i] + face[i + 1:]], j)] = (-1) ** i
    return SparseExactMatrix(len(dst), len(src), entries)


def sort_sign(seq: Sequence) -> tuple[tuple, int]:
    """Sorted copy of ``seq`` and the parity sign of the sorting permutation."""
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = order[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return tuple(seq[i] for i in order), sign


def act_on_face(face: Face, perm: Sequence[int]) -> tuple[Face, int]:
    image = [tuple(sorted(perm[x] for x in b)) for b in face]
    return sort_sign(image)


def face_permutation(cx: MatchingComplexChain, r: int, perm: Sequence[int]) -> tuple[list[int], list[int]]:
    """Images and signs of every r-face under ``perm`` (as index arrays)."""
    idx = cx.index[r]
    targets, signs = [], []
    for face in cx.faces[r]:
        img, s = act_on_face(face, perm)
        targets.append(idx[img])
        signs.append(s)
    return targets, signs


def action_matrix(cx: MatchingComplexChain, r: int, perm: Sequence[int]) -> SparseExactMatrix:
    """Signed permutation matrix of ``perm`` (image tuple on 0..n-1) on r-faces."""
    if sorted(perm) != list(range(cx.n)):
        raise ValueError("perm is not a permutation of the ground set")
    targets, signs = face_permutation(cx, r, perm)
    size = len(targets)
    return SparseExactMatrix(size, size, {(t, j): s for j, (t, s) in enumerate(zip(targets, signs))})


def dump_faces(cx: MatchingComplexChain) -> str:
    """One face per line, blocks as digit groups (1-based), e.g. ``123 456``."""
    sep = "" if cx.n <= 9 else ","
    lines = []
    for r in range(0, cx.r_max + 1):
        for face in cx.faces[r]:
            lines.append(" ".join(sep.join(str(x + 1) for x in b) for b in face))
    return "\n".join(lines) + ("\n" if lines else "")
