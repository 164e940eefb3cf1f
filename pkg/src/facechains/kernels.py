"""Numeric kernels for chain search over a dominance-encoded face order.

Every polytope in this package encodes its vertex order as componentwise
dominance of small integer vectors: ``u <= v`` iff ``code[u] <= code[v]`` in
every coordinate. Face comparability then reduces to ``top_code[i] <=
bottom_code[j]``, which is the only quadratic step in the brute-force search.

Two implementations are kept side by side:

* ``numba`` -- ``@njit`` loops, used by default when numba imports.
* ``numpy`` -- blocked broadcasting plus a short Python loop where the
  recurrence is inherently sequential.

Set ``FACECHAINS_BACKEND=numpy`` to force the fallback. Both paths return
identical arrays; the test suite checks this.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NEG = np.int64(-(2**62))

_ENV_VAR = "FACECHAINS_BACKEND"
_BLOCK_BYTES = 1 << 24


def default_backend() -> str:
    requested = os.environ.get(_ENV_VAR, "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and numba is None:
        return "numpy"
    return requested


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if numba is not None else ("numpy",)


def _resolve(backend: str | None) -> str:
    if backend is None:
        return default_backend()
    if backend not in available_backends():
        raise ValueError(f"backend {backend!r} is not available")
    return backend


# --------------------------------------------------------------------------
# numpy path


def _dominance_csr_numpy(src, dst):
    n, w = src.shape
    m = dst.shape[0]
    indptr = np.zeros(n + 1, dtype=np.int64)
    chunks = []
    step = max(1, _BLOCK_BYTES // max(1, m * max(w, 1)))
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        if w:
            mask = (src[lo:hi, None, :] <= dst[None, :, :]).all(axis=2)
        else:
            mask = np.ones((hi - lo, m), dtype=bool)
        rows, cols = np.nonzero(mask)
        indptr[lo + 1 : hi + 1] = np.bincount(rows, minlength=hi - lo)
        chunks.append(cols.astype(np.int32))
    np.cumsum(indptr, out=indptr)
    indices = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int32)
    return indptr, indices


def _chain_table_numpy(weights, indptr, indices, k):
    n = weights.shape[0]
    table = np.full((k, n), NEG, dtype=np.int64)
    if n == 0:
        return table
    table[0] = weights
    counts = np.diff(indptr)
    has_succ = counts > 0
    starts = indptr[:-1][has_succ]
    for s in range(1, k):
        prev = table[s - 1]
        if indices.size == 0:
            break
        best = np.full(n, NEG, dtype=np.int64)
        best[has_succ] = np.maximum.reduceat(prev[indices], starts)
        ok = best > NEG
        table[s, ok] = weights[ok] + best[ok]
    return table


def _longest_chain_numpy(weights, order, indptr, indices):
    n = weights.shape[0]
    longer = np.full(n, NEG, dtype=np.int64)
    nxt = np.full(n, -1, dtype=np.int64)
    best_any = weights.astype(np.int64).copy()
    for i in order[::-1]:
        succ = indices[indptr[i] : indptr[i + 1]]
        succ = succ[succ != i]
        if succ.size == 0:
            continue
        vals = best_any[succ]
        # smallest index among the maximisers keeps witnesses deterministic
        top = vals.max()
        j = succ[vals == top].min()
        longer[i] = weights[i] + top
        nxt[i] = j
        if longer[i] > best_any[i]:
            best_any[i] = longer[i]
    return longer, nxt, best_any


# --------------------------------------------------------------------------
# numba path

if numba is not None:

    @numba.njit(cache=True)
    def _dominated(src, dst, i, j, w):
        for t in range(w):
            if src[i, t] > dst[j, t]:
                return False
        return True

    @numba.njit(cache=True)
    def _dominance_csr_numba(src, dst):
        n, w = src.shape
        m = dst.shape[0]
        indptr = np.zeros(n + 1, dtype=np.int64)
        for i in range(n):
            c = 0
            for j in range(m):
                if _dominated(src, dst, i, j, w):
                    c += 1
            indptr[i + 1] = indptr[i] + c
        indices = np.empty(indptr[n], dtype=np.int32)
        for i in range(n):
            p = indptr[i]
            for j in range(m):
                if _dominated(src, dst, i, j, w):
                    indices[p] = j
                    p += 1
        return indptr, indices

    @numba.njit(cache=True)
    def _chain_table_numba(weights, indptr, indices, k):
        n = weights.shape[0]
        neg = -(2**62)
        table = np.full((k, n), neg, dtype=np.int64)
        for i in range(n):
            table[0, i] = weights[i]
        for s in range(1, k):
            for i in range(n):
                best = neg
                for p in range(indptr[i], indptr[i + 1]):
                    v = table[s - 1, indices[p]]
                    if v > best:
                        best = v
                if best > neg:
                    table[s, i] = weights[i] + best
        return table

    @numba.njit(cache=True)
    def _longest_chain_numba(weights, order, indptr, indices):
        n = weights.shape[0]
        neg = -(2**62)
        longer = np.full(n, neg, dtype=np.int64)
        nxt = np.full(n, -1, dtype=np.int64)
        best_any = np.empty(n, dtype=np.int64)
        for i in range(n):
            best_any[i] = weights[i]
        for q in range(n - 1, -1, -1):
            i = order[q]
            top = neg
            arg = -1
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                if j == i:
                    continue
                v = best_any[j]
                if v > top or (v == top and j < arg):
                    top = v
                    arg = j
            if arg >= 0:
                longer[i] = weights[i] + top
                nxt[i] = arg
                if longer[i] > best_any[i]:
                    best_any[i] = longer[i]
        return longer, nxt, best_any


# --------------------------------------------------------------------------
# dispatch


def dominance_csr(src, dst, backend: str | None = None):
    """Successor lists of the relation ``src[i] <= dst[j]`` (componentwise).

    Returns ``(indptr, indices)`` in CSR layout with ascending column indices
    in every row.
    """
    src = np.ascontiguousarray(src, dtype=np.int16)
    dst = np.ascontiguousarray(dst, dtype=np.int16)
    if _resolve(backend) == "numba":
        return _dominance_csr_numba(src, dst)
    return _dominance_csr_numpy(src, dst)


def chain_table(weights, indptr, indices, k: int, backend: str | None = None):
    """``table[s, i]`` = best weight sum of a chain of ``s + 1`` faces starting at ``i``.

    Entries equal to ``NEG`` mark "no such chain".
    """
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _chain_table_numba(weights, indptr, indices, k)
    return _chain_table_numpy(weights, indptr, indices, k)


def longest_chain(weights, order, indptr, indices, backend: str | None = None):
    """Node-weighted longest chain of length >= 2, ignoring self loops.

    ``order`` must be a topological order of the relation without its self
    loops. Returns ``(longer, nxt, best_any)``: ``longer[i]`` is the best
    weight of a chain of at least two faces starting at ``i`` (``NEG`` if
    none), ``nxt[i]`` the chosen successor and ``best_any[i]`` the best
    weight of any chain starting at ``i``.
    """
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _longest_chain_numba(weights, order, indptr, indices)
    return _longest_chain_numpy(weights, order, indptr, indices)
