"""Simplices and cubes with their tautological orientations.

Simplex faces are nonempty subsets of ``{0..n}`` ordered by label; cube faces
are words over ``0``, ``1``, ``*`` ordered by bitwise dominance of vertices.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .core import InputError, OrientedPolytope, check_cap


def _simplex_code(v: int, n: int) -> np.ndarray:
    # threshold vector: integer order becomes componentwise order
    code = np.zeros(n, dtype=np.int16)
    code[:v] = 1
    return code


def simplex_faces(n: int) -> list[tuple[int, ...]]:
    return [c for size in range(1, n + 2) for c in combinations(range(n + 1), size)]


def simplex_polytope(n: int, cap: int | None = None) -> OrientedPolytope:
    if n < 0:
        raise InputError("n must be >= 0")
    check_cap("simplex", n, cap)
    faces = simplex_faces(n)
    index = {f: i for i, f in enumerate(faces)}
    codes = np.zeros((len(faces), n), dtype=np.int16)
    for v in range(n + 1):
        codes[index[(v,)]] = _simplex_code(v, n)
    return OrientedPolytope(
        name=f"simplex{n}",
        ambient_dim=n,
        faces=tuple(faces),
        dims=np.array([len(f) - 1 for f in faces], dtype=np.int64),
        bottom_vertex=np.array([index[(f[0],)] for f in faces], dtype=np.int64),
        top_vertex=np.array([index[(f[-1],)] for f in faces], dtype=np.int64),
        codes=codes,
        contains_fn=lambda f, g: set(g) <= set(f),
        serialize_fn=list,
    )


def cube_faces(n: int) -> list[str]:
    words = ["".join(w) for w in product("01*", repeat=n)]
    words.sort(key=lambda w: (w.count("*"), w))
    return words


def _cube_contains(f: str, g: str) -> bool:
    return all(a == "*" or a == b for a, b in zip(f, g))


def cube_polytope(n: int, cap: int | None = None) -> OrientedPolytope:
    if n < 0:
        raise InputError("n must be >= 0")
    check_cap("cube", n, cap)
    faces = cube_faces(n)
    index = {f: i for i, f in enumerate(faces)}
    codes = np.zeros((len(faces), n), dtype=np.int16)
    for i, f in enumerate(faces):
        if "*" not in f:
            codes[i] = [int(c) for c in f]
    return OrientedPolytope(
        name=f"cube{n}",
        ambient_dim=n,
        faces=tuple(faces),
        dims=np.array([f.count("*") for f in faces], dtype=np.int64),
        bottom_vertex=np.array([index[f.replace("*", "0")] for f in faces], dtype=np.int64),
        top_vertex=np.array([index[f.replace("*", "1")] for f in faces], dtype=np.int64),
        codes=codes,
        contains_fn=_cube_contains,
        serialize_fn=str,
    )
