"""Permutahedron faces as ordered set partitions, weak order, and zebra chains."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from .core import FaceChain, InputError, OrientedPolytope, chain_excess, check_cap


@dataclass(frozen=True)
class OrderedSetPartition:
    """Ordered blocks covering ``{1..n}``; elements ascend within each block."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.blocks or any(not b for b in self.blocks):
            raise InputError("blocks must be nonempty")
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(1, len(seen) + 1)):
            raise InputError(f"blocks {self.blocks} do not partition 1..{len(seen)}")

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "OrderedSetPartition":
        return cls(tuple(tuple(sorted(int(x) for x in b)) for b in blocks))

    @classmethod
    def from_word(cls, word: Sequence[int]) -> "OrderedSetPartition":
        return cls(tuple((int(x),) for x in word))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def dim(self) -> int:
        return self.n - len(self.blocks)

    @property
    def is_vertex(self) -> bool:
        return len(self.blocks) == self.n

    @property
    def word(self) -> tuple[int, ...]:
        if not self.is_vertex:
            raise InputError(f"{self} is not a vertex")
        return tuple(b[0] for b in self.blocks)

    def block_positions(self) -> np.ndarray:
        """``pos[i - 1]`` = 1-based index of the block containing ``i``."""
        pos = np.empty(self.n, dtype=np.int64)
        for t, b in enumerate(self.blocks, start=1):
            pos[np.asarray(b) - 1] = t
        return pos

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "".join("[" + ",".join(map(str, b)) + "]" for b in self.blocks)


def block_index(p: OrderedSetPartition, i: int) -> int:
    if not 1 <= i <= p.n:
        raise InputError(f"element {i} outside 1..{p.n}")
    for t, b in enumerate(p.blocks, start=1):
        if i in b:
            return t
    raise AssertionError("unreachable: blocks cover 1..n")


def weak_face_leq(tau: OrderedSetPartition, rho: OrderedSetPartition) -> bool:
    """Every pair ``i < j`` is in order in ``tau`` or in disorder in ``rho``."""
    if tau.n != rho.n:
        raise InputError(f"ground sets differ: {tau.n} vs {rho.n}")
    n = tau.n
    if n <= 24:
        t = _positions(tau)
        r = _positions(rho)
        return all(
            t[i] < t[j] or r[i] > r[j] for i in range(1, n) for j in range(i + 1, n + 1)
        )
    t = tau.block_positions()
    r = rho.block_positions()
    ok = (t[:, None] < t[None, :]) | (r[:, None] > r[None, :])
    return bool(np.triu(~ok, k=1).sum() == 0)


def _positions(p: OrderedSetPartition) -> list[int]:
    pos = [0] * (p.n + 1)
    for t, b in enumerate(p.blocks, start=1):
        for x in b:
            pos[x] = t
    return pos


def face_extremes(tau: OrderedSetPartition) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(bottom word, top word): blocks read ascending, resp. descending."""
    bottom = tuple(x for b in tau.blocks for x in b)
    top = tuple(x for b in tau.blocks for x in reversed(b))
    return bottom, top


def inversions(word: Sequence[int]) -> set[tuple[int, int]]:
    """Pairs ``i < j`` with ``j`` appearing before ``i`` in ``word``."""
    return {(b, a) for a, b in combinations(word, 2) if a > b}


def vertex_leq(u: Sequence[int], v: Sequence[int]) -> bool:
    """Weak order on permutations: inversion-set containment."""
    if sorted(u) != sorted(v):
        raise InputError("words are not permutations of the same set")
    return inversions(u) <= inversions(v)


def refines(tau: OrderedSetPartition, rho: OrderedSetPartition) -> bool:
    """True when ``rho`` is a face of ``tau`` (consecutive blocks of ``rho`` merge to ``tau``)."""
    if tau.n != rho.n:
        return False
    it = iter(rho.blocks)
    for block in tau.blocks:
        need = set(block)
        while need:
            b = next(it, None)
            if b is None or not need.issuperset(b):
                return False
            need.difference_update(b)
    return next(it, None) is None


# --------------------------------------------------------------------------
# zebra chains


def _zebra_member(labels: Sequence[int], width: int, l: int) -> OrderedSetPartition:
    groups: dict[int, list[int]] = {}
    for x in labels:
        r, c = divmod(x - 1, width)
        key = -r if l == 1 else c + (l - 2) * r
        groups.setdefault(key, []).append(x)
    # rows top to bottom for l = 1; decreasing line key otherwise
    return OrderedSetPartition(tuple(tuple(groups[key]) for key in sorted(groups, reverse=True)))


def make_zebra(m: int, n: int, k: int) -> FaceChain:
    """The zebra chain of ``k`` faces of the permutahedron on ``m * n`` letters."""
    if m < 1 or n < 1 or k < 1:
        raise InputError("m, n, k must be >= 1")
    labels = range(1, m * n + 1)
    faces = tuple(_zebra_member(labels, n, l) for l in range(1, k + 1))
    return FaceChain(faces, tuple(f.dim for f in faces), m * n - 1)


def partial_zebra_width(a: int) -> int:
    if a < 1:
        raise InputError("a must be >= 1")
    return isqrt(a - 1) + 1


def make_partial_zebra(a: int, k: int) -> FaceChain:
    """Zebra grouping of ``1..a`` laid out in the smallest square holding ``a`` points."""
    if k < 1:
        raise InputError("k must be >= 1")
    width = partial_zebra_width(a)
    labels = range(1, a + 1)
    faces = tuple(_zebra_member(labels, width, l) for l in range(1, k + 1))
    return FaceChain(faces, tuple(f.dim for f in faces), a - 1)


def zebra_part_count(n: int, l: int) -> int:
    """Measured number of blocks in the ``l``-th member of the square zebra chain."""
    if n < 1 or l < 1:
        raise InputError("n, l must be >= 1")
    return len(_zebra_member(range(1, n * n + 1), n, l).blocks)


def zebra_part_claim(n: int, l: int) -> int | None:
    """Claimed closed-form block count; ``None`` outside its stated range."""
    if l <= 2:
        return n
    if n < l - 2:
        return None
    return (l - 1) * n - 1


def zebra_excess_claim(n: int, k: int) -> int:
    """Claimed closed form for the excess of the square zebra chain."""
    return (1 - k) * n * n + (1 + k * (k - 1) // 2) * n + 1


def zebra_discrepancies(n: int, k: int) -> list[dict]:
    """Measured-vs-claimed comparisons for the square zebra chain ``Zeb^k(n, n)``.

    Never alters the computed chain; returns one record per comparison.
    """
    chain = make_zebra(n, n, k)
    out = []
    for l in range(1, k + 1):
        claimed = zebra_part_claim(n, l)
        measured = len(chain.faces[l - 1].blocks)
        if claimed is None:
            continue
        out.append(
            {
                "anchor": "zebra_part_count_formula",
                "n": n,
                "l": l,
                "claimed": claimed,
                "measured": measured,
                "status": "MATCH" if claimed == measured else "MISMATCH",
            }
        )
    if all(zebra_part_claim(n, l) is not None for l in range(1, k + 1)):
        claimed = zebra_excess_claim(n, k)
        measured = chain_excess(chain)
        out.append(
            {
                "anchor": "zebra_excess_closed_form",
                "n": n,
                "k": k,
                "claimed": claimed,
                "measured": measured,
                "status": "MATCH" if claimed == measured else "MISMATCH",
            }
        )
    return out


# --------------------------------------------------------------------------
# the permutahedron as an oriented polytope


def ordered_set_partitions(n: int) -> list[OrderedSetPartition]:
    """All ordered set partitions of ``{1..n}``, sorted by (dim, blocks)."""

    def rec(rest: tuple[int, ...]):
        if not rest:
            yield ()
            return
        for size in range(1, len(rest) + 1):
            for first in combinations(rest, size):
                remaining = tuple(x for x in rest if x not in first)
                for tail in rec(remaining):
                    yield (first,) + tail

    faces = [OrderedSetPartition(b) for b in rec(tuple(range(1, n + 1)))]
    faces.sort(key=lambda f: (f.dim, f.blocks))
    return faces


def inversion_code(word: Sequence[int], n: int) -> np.ndarray:
    pos = np.empty(n + 1, dtype=np.int64)
    pos[list(word)] = np.arange(n)
    pairs = list(combinations(range(1, n + 1), 2))
    return np.array([pos[i] > pos[j] for i, j in pairs], dtype=np.int16)


def permutahedron_polytope(n: int, cap: int | None = None) -> OrientedPolytope:
    """The permutahedron on ``n`` letters with the weak-order orientation."""
    if n < 1:
        raise InputError("n must be >= 1")
    check_cap("perm", n, cap)
    faces = ordered_set_partitions(n)
    index = {f: i for i, f in enumerate(faces)}
    width = n * (n - 1) // 2
    codes = np.zeros((len(faces), width), dtype=np.int16)
    bottom = np.empty(len(faces), dtype=np.int64)
    top = np.empty(len(faces), dtype=np.int64)
    for i, f in enumerate(faces):
        if f.is_vertex:
            codes[i] = inversion_code(f.word, n)
        lo, hi = face_extremes(f)
        bottom[i] = index[OrderedSetPartition.from_word(lo)]
        top[i] = index[OrderedSetPartition.from_word(hi)]
    return OrientedPolytope(
        name=f"P{n}",
        ambient_dim=n - 1,
        faces=tuple(faces),
        dims=np.array([f.dim for f in faces], dtype=np.int64),
        bottom_vertex=bottom,
        top_vertex=top,
        codes=codes,
        contains_fn=refines,
        serialize_fn=OrderedSetPartition.to_json,
    )
