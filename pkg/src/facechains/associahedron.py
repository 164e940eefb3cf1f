"""Associahedron faces as planar trees, Tamari order, and thuja chains.

Trees are plain nested tuples: a leaf is ``0`` and an internal node is the
tuple of its (at least two) children. This is also the JSON form, with
tuples written as arrays, e.g. the corolla on three leaves is ``[0, 0, 0]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

import numpy as np

from . import kernels
from .core import (
    FaceChain,
    InputError,
    OrientedPolytope,
    chain_excess,
    check_cap,
    facet_bound,
)

LEAF = 0


# --------------------------------------------------------------------------
# basic tree functions


def _nodes(t) -> Iterator[tuple]:
    stack = [t]
    while stack:
        x = stack.pop()
        if x != LEAF:
            yield x
            stack.extend(x)


def leaf_count(t) -> int:
    return 1 + sum(len(x) - 1 for x in _nodes(t))


def internal_count(t) -> int:
    return sum(1 for _ in _nodes(t))


def tree_dim(t) -> int:
    return leaf_count(t) - 1 - internal_count(t)


def is_binary(t) -> bool:
    return all(len(x) == 2 for x in _nodes(t))


def tree_from_json(obj: Any):
    """Parse the nested-array form, rejecting unary nodes and stray values."""
    if obj == LEAF and not isinstance(obj, bool):
        return LEAF
    if not isinstance(obj, (list, tuple)):
        raise InputError(f"not a tree: {obj!r}")
    if len(obj) < 2:
        raise InputError("internal nodes need at least two children")
    return tuple(tree_from_json(c) for c in obj)


def tree_to_json(t):
    if t == LEAF:
        return 0
    return [tree_to_json(c) for c in t]


def tree_str(t) -> str:
    """Bracketing with leaves numbered left to right, e.g. ``(1(2(34)5)6)``."""
    counter = iter(range(1, leaf_count(t) + 1))

    def rec(x):
        if x == LEAF:
            return str(next(counter))
        return "(" + "".join(rec(c) for c in x) + ")"

    return rec(t)


def left_comb_of(children):
    acc = children[0]
    for c in children[1:]:
        acc = (acc, c)
    return acc


def right_comb_of(children):
    acc = children[-1]
    for c in reversed(children[:-1]):
        acc = (c, acc)
    return acc


def left_comb(m: int):
    return LEAF if m == 1 else left_comb_of((LEAF,) * m)


def t_max(m: int):
    """Right comb on ``m`` leaves: the Tamari-maximal binary tree."""
    if m < 1:
        raise InputError("m must be >= 1")
    return LEAF if m == 1 else right_comb_of((LEAF,) * m)


def tree_face_extremes(t):
    """(bottom, top) binary refinements: left combs, resp. right combs, at every node."""
    if t == LEAF:
        return LEAF, LEAF
    parts = [tree_face_extremes(c) for c in t]
    return left_comb_of([p[0] for p in parts]), right_comb_of([p[1] for p in parts])


def graft(t1, leaf_index: int, t2):
    """Replace leaf ``leaf_index`` of ``t1`` (left-to-right, negatives count from the right) by ``t2``."""
    n1 = leaf_count(t1)
    if leaf_index < 0:
        leaf_index += n1
    if not 0 <= leaf_index < n1:
        raise InputError(f"leaf index out of range for a tree with {n1} leaves")
    seen = 0

    def rec(x):
        nonlocal seen
        if x == LEAF:
            seen += 1
            return t2 if seen - 1 == leaf_index else LEAF
        return tuple(rec(c) for c in x)

    return rec(t1)


def thuja(n: int):
    """Fully nested bracketing with ``n // 2`` bracket pairs, e.g. ``(1(2(34)5)6)``."""
    if n < 2:
        raise InputError("a thuja needs n >= 2")
    t = (LEAF,) * (2 if n % 2 == 0 else 3)
    for _ in range((n - 2) // 2):
        t = (LEAF, t, LEAF)
    return t


def thuja_chain(n: int, k: int | None = None) -> FaceChain:
    """First ``k`` members (default ``n - 1``) of the thuja chain in K(n)."""
    if k is None:
        k = n - 1
    if n < 2 or not 1 <= k <= n - 1:
        raise InputError("need n >= 2 and 1 <= k <= n - 1")
    faces = tuple(graft(t_max(l), -1, thuja(n - l + 1)) for l in range(1, k + 1))
    # t_max is zero-dimensional and grafting adds dimensions
    dims = tuple((n - l) // 2 for l in range(1, k + 1))
    return FaceChain(faces, dims, n - 2)


def thuja_excess_formula(n: int, k: int) -> int:
    if n < 2 or not 1 <= k <= n - 1:
        raise InputError("need n >= 2 and 1 <= k <= n - 1")
    return (n - 3) - sum((n - l) // 2 - 1 for l in range(1, k + 1))


def thuja_excess(n: int, k: int, verify: bool = True) -> int:
    """Excess of the first ``k`` thuja members; optionally cross-checked on the built trees."""
    value = thuja_excess_formula(n, k)
    if verify:
        chain = thuja_chain(n, k)
        measured = FaceChain(chain.faces, tuple(tree_dim(t) for t in chain.faces), n - 2)
        if chain_excess(measured) != value:
            raise AssertionError(f"thuja excess mismatch at n={n}, k={k}")
    return value


def thuja_ratio(n: int, k: int) -> Fraction | None:
    bound = facet_bound(k, n - 2)
    return None if bound == 0 else Fraction(thuja_excess_formula(n, k), bound)


# --------------------------------------------------------------------------
# Tamari order


def right_rotations(t) -> list:
    """All trees one right rotation ``((A, B), C) -> (A, (B, C))`` above ``t``."""
    if t == LEAF:
        return []
    out = []
    left, right = t
    if left != LEAF:
        a, b = left
        out.append((a, (b, right)))
    out.extend((x, right) for x in right_rotations(left))
    out.extend((left, x) for x in right_rotations(right))
    return out


def tamari_leq_oracle(t, u) -> bool:
    """Reachability by right rotations (breadth-first search)."""
    _require_binary(t, u)
    seen = {t}
    queue = deque([t])
    while queue:
        x = queue.popleft()
        if x == u:
            return True
        for y in right_rotations(x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return False


def tamari_code(t) -> np.ndarray:
    """Right-subtree sizes (in internal nodes) of the internal nodes in in-order.

    Right rotations raise exactly one entry, and componentwise comparison of
    these vectors is the Tamari order.
    """
    out: list[int] = []

    def rec(x) -> int:
        if x == LEAF:
            return 0
        a = rec(x[0])
        slot = len(out)
        out.append(0)
        b = rec(x[1])
        out[slot] = b
        return a + b + 1

    rec(t)
    return np.array(out, dtype=np.int16)


def _require_binary(*trees):
    n = leaf_count(trees[0])
    for t in trees:
        if not is_binary(t):
            raise InputError(f"{tree_str(t)} is not binary")
        if leaf_count(t) != n:
            raise InputError("trees have different leaf counts")


def tamari_leq(t, u) -> bool:
    _require_binary(t, u)
    return bool(np.all(tamari_code(t) <= tamari_code(u)))


def tree_face_leq(f, g) -> bool:
    """Face relation: top refinement of ``f`` is Tamari-below the bottom of ``g``."""
    return tamari_leq(tree_face_extremes(f)[1], tree_face_extremes(g)[0])


@dataclass(frozen=True)
class LeaningCount:
    d_down: int
    d_up: int


def leaning_counts(v) -> LeaningCount:
    """Right-leaning (``d_down``) and left-leaning (``d_up``) inner edges."""
    if not is_binary(v):
        raise InputError(f"{tree_str(v)} is not binary")
    down = up = 0
    for x in _nodes(v):
        up += x[0] != LEAF
        down += x[1] != LEAF
    return LeaningCount(down, up)


# --------------------------------------------------------------------------
# enumeration and the oriented polytope


def _compositions(n: int, parts_min: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        if parts_min <= 0:
            yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first, parts_min - 1):
            yield (first,) + rest


def planar_trees(n: int) -> list:
    """All planar trees on ``n`` leaves, sorted by (dim, bracketing)."""
    memo: dict[int, list] = {1: [LEAF]}

    def trees(m: int) -> list:
        if m not in memo:
            out = []
            for comp in _compositions(m, 2):
                out.extend(_product([trees(c) for c in comp]))
            memo[m] = out
        return memo[m]

    result = list(trees(n))
    result.sort(key=lambda t: (tree_dim(t), tree_str(t)))
    return result


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product(lists[1:]):
            yield (head,) + tail


def leaf_intervals(t) -> frozenset[tuple[int, int]]:
    """Leaf ranges spanned by the internal nodes."""
    out = set()

    def rec(x, start):
        if x == LEAF:
            return start + 1
        end = start
        for c in x:
            end = rec(c, end)
        out.add((start, end))
        return end

    rec(t, 0)
    return frozenset(out)


def tree_contains(f, g) -> bool:
    """``g`` is a face of ``f``: ``f`` arises from ``g`` by contracting inner edges."""
    return leaf_count(f) == leaf_count(g) and leaf_intervals(f) <= leaf_intervals(g)


def associahedron_polytope(n: int, cap: int | None = None) -> OrientedPolytope:
    """K(n) with the Tamari orientation."""
    if n < 2:
        raise InputError("n must be >= 2")
    check_cap("assoc", n, cap)
    faces = planar_trees(n)
    index = {f: i for i, f in enumerate(faces)}
    codes = np.zeros((len(faces), n - 1), dtype=np.int16)
    bottom = np.empty(len(faces), dtype=np.int64)
    top = np.empty(len(faces), dtype=np.int64)
    dims = np.empty(len(faces), dtype=np.int64)
    for i, f in enumerate(faces):
        dims[i] = tree_dim(f)
        if dims[i] == 0:
            codes[i] = tamari_code(f)
        lo, hi = tree_face_extremes(f)
        bottom[i] = index[lo]
        top[i] = index[hi]
    return OrientedPolytope(
        name=f"K{n}",
        ambient_dim=n - 2,
        faces=tuple(faces),
        dims=dims,
        bottom_vertex=bottom,
        top_vertex=top,
        codes=codes,
        contains_fn=tree_contains,
        serialize_fn=tree_to_json,
    )


@dataclass(frozen=True)
class TwoShortReport:
    n: int
    passed: bool
    vertex_pairs: int
    face_pairs: int
    vertex_violation: tuple | None = None
    face_violation: tuple | None = None


def two_short_check(n: int, cap: int | None = None) -> TwoShortReport:
    """Exhaustive check that every 2-chain in K(n) has positive excess.

    Runs two independent forms: the leaning-edge inequality over comparable
    vertex pairs, and the dimension inequality over comparable face pairs.
    """
    P = associahedron_polytope(n, cap)
    limit = n - 2

    verts = P.vertices
    lean = [leaning_counts(P.faces[v]) for v in verts]
    down = np.array([c.d_down for c in lean], dtype=np.int64)
    up = np.array([c.d_up for c in lean], dtype=np.int64)
    vc = P.codes[verts]
    vptr, vind = kernels.dominance_csr(vc, vc)
    rows = np.repeat(np.arange(len(verts)), np.diff(vptr))
    bad = np.flatnonzero(down[rows] + up[vind] > limit)
    vertex_violation = None
    if bad.size:
        b = bad[0]
        vertex_violation = (P.faces[verts[rows[b]]], P.faces[verts[vind[b]]])

    fptr, find = P.comparability
    frows = np.repeat(np.arange(len(P)), np.diff(fptr))
    fbad = np.flatnonzero(P.dims[frows] + P.dims[find] > limit)
    face_violation = None
    if fbad.size:
        b = fbad[0]
        face_violation = (P.faces[frows[b]], P.faces[find[b]])

    passed = vertex_violation is None and face_violation is None
    return TwoShortReport(n, passed, int(vind.size), int(find.size), vertex_violation, face_violation)


def thuja_extreme_equalities(n: int, k: int | None = None) -> list[bool]:
    """Whether top(member l) equals bottom(member l + 1) along the thuja chain."""
    chain = thuja_chain(n, k)
    return [
        tree_face_extremes(a)[1] == tree_face_extremes(b)[0]
        for a, b in zip(chain.faces, chain.faces[1:])
    ]
