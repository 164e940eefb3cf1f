"""Orientation-agnostic chain machinery shared by every polytope family."""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels


class InputError(ValueError):
    """Invalid arguments: unknown faces, out-of-range parameters, bad chains."""


class CapExceededError(Exception):
    """A brute-force computation was refused because it exceeds a size cap."""


# --------------------------------------------------------------------------
# brute-force caps

DEFAULT_CAPS = {"perm": 6, "assoc": 9, "cube": 5, "simplex": 8}
CAPS_ENV = "FACECHAINS_CAPS"


def _env_caps() -> dict[str, int]:
    raw = os.environ.get(CAPS_ENV, "").strip()
    if not raw:
        return {}
    caps = {}
    for item in raw.split(","):
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in DEFAULT_CAPS or not value.strip().isdigit():
            raise InputError(f"bad {CAPS_ENV} entry {item!r}; expected e.g. 'perm=7,assoc=10'")
        caps[name] = int(value)
    return caps


def cap_for(family: str, override: int | None = None) -> int:
    """Brute-force size cap for ``family``; overrides emit a ResourceWarning."""
    if override is None:
        override = _env_caps().get(family)
    if override is None:
        return DEFAULT_CAPS[family]
    if override != DEFAULT_CAPS[family]:
        warnings.warn(
            f"{family} brute-force cap overridden: {DEFAULT_CAPS[family]} -> {override}",
            ResourceWarning,
            stacklevel=2,
        )
    return override


def check_cap(family: str, n: int, cap: int | None = None) -> None:
    limit = cap_for(family, cap)
    if n > limit:
        raise CapExceededError(
            f"{family} n={n} exceeds the brute-force cap {limit}; "
            f"raise it with --cap or {CAPS_ENV} at your own risk"
        )


# --------------------------------------------------------------------------
# polytopes and chains


@dataclass(frozen=True, eq=False)
class OrientedPolytope:
    """Abstract face set with a vertex order given by dominance codes.

    ``codes[v]`` is meaningful for vertex faces ``v``; the vertex order is
    ``codes[u] <= codes[v]`` componentwise. ``bottom_vertex[i]`` and
    ``top_vertex[i]`` are face indices of the extreme vertices of face ``i``.
    """

    name: str
    ambient_dim: int
    faces: tuple
    dims: np.ndarray
    bottom_vertex: np.ndarray
    top_vertex: np.ndarray
    codes: np.ndarray
    contains_fn: Callable[[Any, Any], bool] | None = None
    serialize_fn: Callable[[Any], Any] = repr

    def __len__(self) -> int:
        return len(self.faces)

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {f: i for i, f in enumerate(self.faces)}

    def index_of(self, face) -> int:
        try:
            return self.index[face]
        except (KeyError, TypeError):
            raise InputError(f"{face!r} is not a face of {self.name}") from None

    def dim(self, face) -> int:
        return int(self.dims[self.index_of(face)])

    def top(self, face):
        return self.faces[self.top_vertex[self.index_of(face)]]

    def bottom(self, face):
        return self.faces[self.bottom_vertex[self.index_of(face)]]

    def vertex_leq(self, u, v) -> bool:
        iu, iv = self.index_of(u), self.index_of(v)
        if self.dims[iu] or self.dims[iv]:
            raise InputError("vertex_leq expects two vertices")
        return bool(np.all(self.codes[iu] <= self.codes[iv]))

    def contains(self, face, subface) -> bool:
        if self.contains_fn is None:
            raise InputError(f"{self.name} carries no face containment")
        self.index_of(face)
        self.index_of(subface)
        return bool(self.contains_fn(face, subface))

    @property
    def vertices(self) -> np.ndarray:
        return np.flatnonzero(self.dims == 0)

    @cached_property
    def top_codes(self) -> np.ndarray:
        return self.codes[self.top_vertex]

    @cached_property
    def bottom_codes(self) -> np.ndarray:
        return self.codes[self.bottom_vertex]

    @cached_property
    def comparability(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR successor lists of ``face_leq`` over face indices."""
        return kernels.dominance_csr(self.top_codes, self.bottom_codes)

    @cached_property
    def order_key(self) -> np.ndarray:
        # strictly increases along every non-loop comparability edge
        return self.top_codes.sum(axis=1, dtype=np.int64) + self.bottom_codes.sum(axis=1, dtype=np.int64)

    @cached_property
    def proper(self) -> "OrientedPolytope":
        """The same polytope with the top face (the polytope itself) removed."""
        return _subset(self, np.flatnonzero(self.dims < self.ambient_dim), self.name, self.ambient_dim)

    def successors(self, i: int) -> np.ndarray:
        indptr, indices = self.comparability
        return indices[indptr[i] : indptr[i + 1]]

    def chain(self, faces: Sequence) -> "FaceChain":
        """A validated :class:`FaceChain` made of faces of this polytope."""
        idx = [self.index_of(f) for f in faces]
        for a, b in zip(idx, idx[1:]):
            if not self._leq_idx(a, b):
                raise InputError(f"{self.faces[a]!r} <= {self.faces[b]!r} fails in {self.name}")
        return FaceChain(tuple(faces), tuple(int(self.dims[i]) for i in idx), self.ambient_dim)

    def _leq_idx(self, a: int, b: int) -> bool:
        return bool(np.all(self.top_codes[a] <= self.bottom_codes[b]))

    def check_invariants(self) -> list[str]:
        """Exhaustively test the structural invariants; returns a list of problems."""
        problems = []
        verts = self.vertices
        if verts.size == 0:
            return ["no vertices"]
        vc = self.codes[verts]
        le = (vc[:, None, :] <= vc[None, :, :]).all(axis=2)
        if not (le & le.T == np.eye(len(verts), dtype=bool)).all():
            problems.append("vertex order is not antisymmetric (codes collide)")
        # dominance is reflexive and transitive by construction
        minima = np.flatnonzero(le.all(axis=1))
        maxima = np.flatnonzero(le.all(axis=0))
        if minima.size != 1:
            problems.append("vertex order has no unique minimum")
        if maxima.size != 1:
            problems.append("vertex order has no unique maximum")
        if not (self.bottom_codes <= self.top_codes).all():
            problems.append("some face has bottom > top")
        same = self.bottom_vertex == self.top_vertex
        if not np.array_equal(same, self.dims == 0):
            problems.append("dim 0 does not coincide with top == bottom")
        return problems


def face_leq(F, G, P: OrientedPolytope) -> bool:
    """``F <= G``: the top vertex of ``F`` is below the bottom vertex of ``G``."""
    return P._leq_idx(P.index_of(F), P.index_of(G))


@dataclass(frozen=True)
class FaceChain:
    faces: tuple
    dims: tuple[int, ...]
    ambient_dim: int

    def __post_init__(self):
        if not self.faces:
            raise InputError("a face chain must be nonempty")
        if len(self.faces) != len(self.dims):
            raise InputError("faces and dims differ in length")

    def __len__(self) -> int:
        return len(self.faces)

    def pair_verdicts(self, leq: Callable[[Any, Any], bool]) -> list[bool]:
        return [bool(leq(a, b)) for a, b in zip(self.faces, self.faces[1:])]

    def is_valid(self, leq: Callable[[Any, Any], bool]) -> bool:
        return all(self.pair_verdicts(leq))


def chain_excess(chain: FaceChain) -> int:
    if not len(chain):
        raise InputError("excess of an empty chain")
    return (chain.ambient_dim - 1) - sum(d - 1 for d in chain.dims)


def facet_bound(k: int, n: int) -> int:
    """Excess of a hypothetical chain of ``k`` facets in dimension ``n``."""
    return (1 - k) * n + 2 * k - 1


# --------------------------------------------------------------------------
# minimal excess


@dataclass(frozen=True)
class MinExcessReport:
    k: int
    ambient_dim: int
    e_k: int | None
    f_k: int | None
    witness: FaceChain | None

    @property
    def exists(self) -> bool:
        return self.witness is not None


def min_excess(P: OrientedPolytope, k: int) -> MinExcessReport:
    """Exact minimal excess over all ``k``-chains of proper faces of ``P``.

    Maximises the dimension sum with a ``k``-stage DP over the comparability
    relation. The witness is the lexicographically smallest optimal sequence
    of face indices. Returns a report with ``exists == False`` when ``P`` has
    no such chain (a point has no proper faces).
    """
    if k < 1:
        raise InputError("chain length k must be >= 1")
    P = P.proper
    indptr, indices = P.comparability
    table = kernels.chain_table(P.dims, indptr, indices, k)
    last = table[k - 1]
    if last.size == 0 or last.max() <= kernels.NEG:
        return MinExcessReport(k, P.ambient_dim, None, None, None)
    f = int(last.max())
    cur = int(np.flatnonzero(last == f)[0])
    path = [cur]
    for s in range(k - 1, 0, -1):
        need = table[s, cur] - P.dims[cur]
        succ = indices[indptr[cur] : indptr[cur + 1]]
        cur = int(succ[table[s - 1, succ] == need][0])
        path.append(cur)
    witness = FaceChain(
        tuple(P.faces[i] for i in path), tuple(int(P.dims[i]) for i in path), P.ambient_dim
    )
    e = (P.ambient_dim - 1) - (f - k)
    return MinExcessReport(k, P.ambient_dim, e, f, witness)


# --------------------------------------------------------------------------
# shortness


@dataclass(frozen=True)
class ShortnessReport:
    short: bool
    recursive: bool
    faces_checked: int
    face: Any = None
    witness: FaceChain | None = None
    excess: int | None = None


def _subset(P: OrientedPolytope, keep: np.ndarray, name: str, ambient_dim: int, codes=None):
    keep = np.asarray(keep, dtype=np.int64)
    remap = np.full(len(P), -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    return OrientedPolytope(
        name=name,
        ambient_dim=ambient_dim,
        faces=tuple(P.faces[i] for i in keep),
        dims=P.dims[keep],
        bottom_vertex=remap[P.bottom_vertex[keep]],
        top_vertex=remap[P.top_vertex[keep]],
        codes=(P.codes if codes is None else codes)[keep],
        contains_fn=P.contains_fn,
        serialize_fn=P.serialize_fn,
    )


def _check_own_chains(P: OrientedPolytope) -> tuple[bool, FaceChain | None, int | None]:
    """Shortness of ``P`` itself: every chain of >= 2 proper faces has excess > 0."""
    d = P.ambient_dim
    if d <= 0:
        return True, None, None
    Q = P.proper
    indptr, indices = Q.comparability
    order = np.argsort(Q.order_key, kind="stable")
    longer, nxt, best_any = kernels.longest_chain(Q.dims - 1, order, indptr, indices)
    if longer.size == 0 or longer.max() <= kernels.NEG:
        return True, None, None
    best = int(longer.max())
    exc = (d - 1) - best
    if exc > 0:
        return True, None, exc
    i = int(np.flatnonzero(longer == best)[0])
    path = [i, int(nxt[i])]
    j = path[-1]
    while nxt[j] >= 0 and best_any[j] > Q.dims[j] - 1:
        j = int(nxt[j])
        path.append(j)
    witness = FaceChain(tuple(Q.faces[t] for t in path), tuple(int(Q.dims[t]) for t in path), d)
    return False, witness, exc


def face_polytope(P: OrientedPolytope, face) -> OrientedPolytope:
    """The face as a polytope, with its vertex order rebuilt from its own 1-skeleton."""
    fi = P.index_of(face)
    if P.contains_fn is None:
        raise InputError(f"{P.name} carries no face containment")
    keep = np.array([j for j, g in enumerate(P.faces) if P.contains_fn(face, g)], dtype=np.int64)
    sub_dims = P.dims[keep]
    verts = keep[sub_dims == 0]
    edges = keep[sub_dims == 1]
    pos = {int(v): t for t, v in enumerate(verts)}
    preds: list[list[int]] = [[] for _ in verts]
    for e in edges:
        preds[pos[int(P.top_vertex[e])]].append(pos[int(P.bottom_vertex[e])])
    # the global order refines every edge orientation, so its key is a topological order
    key = P.codes[verts].sum(axis=1, dtype=np.int64)
    down = np.zeros((len(verts), len(verts)), dtype=np.int16)
    for t in np.argsort(key, kind="stable"):
        down[t, t] = 1
        for s in preds[t]:
            np.maximum(down[t], down[s], out=down[t])
    codes = np.zeros((len(P), len(verts)), dtype=np.int16)
    codes[verts] = down
    return _subset(P, keep, f"{P.name}[{P.serialize_fn(face)}]", int(P.dims[fi]), codes=codes)


def shortness_report(P: OrientedPolytope, recursive: bool = False) -> ShortnessReport:
    """Check that nontrivial chains have positive excess.

    Non-recursive mode checks the chains of proper faces of ``P``. Recursive
    mode additionally checks every proper face of dimension >= 2 as a
    polytope in its own right (lower-dimensional faces are trivially short).
    """
    ok, witness, exc = _check_own_chains(P)
    checked = 1
    if not ok:
        return ShortnessReport(False, recursive, checked, None, witness, exc)
    if recursive:
        for i in np.flatnonzero((P.dims >= 2) & (P.dims < P.ambient_dim)):
            sub = face_polytope(P, P.faces[i])
            ok, witness, exc = _check_own_chains(sub)
            checked += 1
            if not ok:
                return ShortnessReport(False, recursive, checked, P.faces[i], witness, exc)
    return ShortnessReport(True, recursive, checked)


# --------------------------------------------------------------------------
# asymptotic length estimates


@dataclass(frozen=True)
class LengthPoint:
    """One family member: its parameter, a chain excess and dimensions.

    ``bound_dim`` is the argument passed to :func:`facet_bound`; it defaults
    to ``ambient_dim``.
    """

    n: int
    excess: int
    ambient_dim: int
    bound_dim: int | None = None


@dataclass(frozen=True)
class LengthEstimateRow:
    n: int
    k: int
    e_k: int
    E_k: int
    ratio: Fraction | None
    beta_finite: Fraction


@dataclass(frozen=True)
class LengthEstimates:
    rows: list[LengthEstimateRow] = field(default_factory=list)
    non_decreasing: bool = True
    strictly_increasing: bool = True


def length_estimates(points: Iterable[LengthPoint], k: int) -> LengthEstimates:
    rows = []
    for p in points:
        bound = facet_bound(k, p.ambient_dim if p.bound_dim is None else p.bound_dim)
        ratio = Fraction(p.excess, bound) if bound != 0 else None
        f_k = (p.ambient_dim - 1) - p.excess + k
        beta = Fraction(f_k, p.ambient_dim) if p.ambient_dim else Fraction(0)
        rows.append(LengthEstimateRow(p.n, k, p.excess, bound, ratio, beta))
    ratios = [r.ratio for r in rows if r.ratio is not None]
    pairs = list(zip(ratios, ratios[1:]))
    return LengthEstimates(
        rows,
        non_decreasing=all(a <= b for a, b in pairs),
        strictly_increasing=all(a < b for a, b in pairs),
    )


def beta_from_alpha(alpha, k: int) -> Fraction:
    return 1 + (k - 1) * Fraction(alpha)


def alpha_from_beta(beta, k: int) -> Fraction:
    if k < 2:
        raise InputError("alpha is undefined from beta when k = 1")
    return (Fraction(beta) - 1) / (k - 1)


def alpha_upper_bound(l: int, k: int, alpha_k) -> Fraction:
    """Upper bound on the asymptotic ``l``-length given the ``k``-length."""
    if k < 2 or l < k:
        raise InputError("need l >= k >= 2")
    alpha_k = Fraction(alpha_k)
    return Fraction(l * (k - 1), k * (l - 1)) * alpha_k + Fraction(l - k, k * (l - 1))


def total_length_bound(k: int, alpha_k) -> Fraction:
    """Limit of :func:`alpha_upper_bound` as ``l`` grows."""
    if k < 2:
        raise InputError("need k >= 2")
    return Fraction(k - 1, k) * Fraction(alpha_k) + Fraction(1, k)


def assoc_corollary_bound(k: int) -> Fraction:
    """``(k-2)/(2k-2)``: the l-length bound that follows from 2-shortness."""
    if k < 2:
        raise InputError("need k >= 2")
    return Fraction(k - 2, 2 * k - 2)
