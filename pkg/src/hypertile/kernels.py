"""Counting kernels over the dense adjacency cube.

Every kernel has two implementations: a numba ``@njit`` loop nest and a
vectorized numpy version. The active one is chosen at import time from the
``HYPERTILE_NUMBA`` environment variable (``0``/``false``/``off`` selects
numpy) and can be switched at runtime with :func:`set_backend`. Both paths
are exported under ``*_numba`` / ``*_numpy`` names so tests and the
benchmark can call them side by side.

``adj`` is always the symmetric ``(n, n, n)`` boolean cube of a
:class:`~hypertile.hypergraph.Hypergraph3`.
"""
from __future__ import annotations

import os
from functools import lru_cache
from itertools import combinations

import numpy as np

try:
    import numba
    from numba import njit, prange

    # an old system TBB only produces a warning; skip straight to the others
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

ENV_FLAG = "HYPERTILE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(ENV_FLAG, "1").strip().lower() not in ("0", "false", "no", "off")


_backend = "numba" if (HAVE_NUMBA and _numba_requested()) else "numpy"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


def set_threads(count: int) -> int:
    """Cap numba worker threads; returns the effective count (1 for numpy)."""
    if count < 1:
        raise ValueError("thread count must be positive")
    if not HAVE_NUMBA:
        return 1
    count = min(count, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(count)
    return count


@lru_cache(maxsize=64)
def combinations_array(n: int, k: int) -> np.ndarray:
    """All k-subsets of range(n) in lexicographic order, shape (C(n,k), k)."""
    flat = np.fromiter(
        (v for c in combinations(range(n), k) for v in c), dtype=np.int32
    )
    out = flat.reshape(-1, k)
    out.flags.writeable = False
    return out


# ---------------------------------------------------------------- numpy path


def quad_edge_counts_numpy(adj: np.ndarray, quads: np.ndarray) -> np.ndarray:
    a, b, c, d = quads.T
    cube = adj.view(np.uint8)
    return (cube[a, b, c] + cube[a, b, d] + cube[a, c, d] + cube[b, c, d]).astype(np.int8)


def triple_link_numpy(adj: np.ndarray, triples: np.ndarray, min_edges: int = 3) -> np.ndarray:
    """Row t, column v: does ``triples[t] + v`` span at least ``min_edges`` edges."""
    n = adj.shape[0]
    t = triples.shape[0]
    if t == 0:
        return np.zeros((0, n), dtype=bool)
    cube = adj.view(np.uint8)
    a, b, c = triples.T
    count = cube[a, b, :] + cube[a, c, :] + cube[b, c, :] + cube[a, b, c][:, None]
    ok = count >= min_edges
    rows = np.arange(t)
    ok[rows, a] = False
    ok[rows, b] = False
    ok[rows, c] = False
    return ok


def connector_counts_numpy(adj: np.ndarray, min_edges: int = 3) -> np.ndarray:
    n = adj.shape[0]
    if n < 5:
        return np.zeros((n, n), dtype=np.int64)
    return _gram(triple_link_numpy(adj, combinations_array(n, 3), min_edges))


def _gram(ok: np.ndarray) -> np.ndarray:
    f = ok.astype(np.float64)
    # float64 BLAS is exact here: counts are bounded by C(n, 3) << 2**53
    out = np.rint(f.T @ f).astype(np.int64)
    np.fill_diagonal(out, 0)
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _quad_edge_counts_nb(cube, quads):
        q = quads.shape[0]
        out = np.empty(q, dtype=np.int8)
        for i in prange(q):
            a = quads[i, 0]
            b = quads[i, 1]
            c = quads[i, 2]
            d = quads[i, 3]
            out[i] = cube[a, b, c] + cube[a, b, d] + cube[a, c, d] + cube[b, c, d]
        return out

    @njit(cache=True)
    def _triple_link_nb(cube, triples, min_edges):
        n = cube.shape[0]
        t = triples.shape[0]
        ok = np.zeros((t, n), dtype=np.bool_)
        for s in range(t):
            a = triples[s, 0]
            b = triples[s, 1]
            c = triples[s, 2]
            base = cube[a, b, c]
            for v in range(n):
                if v == a or v == b or v == c:
                    continue
                if base + cube[a, b, v] + cube[a, c, v] + cube[b, c, v] >= min_edges:
                    ok[s, v] = True
        return ok


def quad_edge_counts_numba(adj: np.ndarray, quads: np.ndarray) -> np.ndarray:
    return _quad_edge_counts_nb(adj.view(np.uint8), np.ascontiguousarray(quads, dtype=np.int32))


def triple_link_numba(adj: np.ndarray, triples: np.ndarray, min_edges: int = 3) -> np.ndarray:
    if triples.shape[0] == 0:
        return np.zeros((0, adj.shape[0]), dtype=bool)
    return _triple_link_nb(
        adj.view(np.uint8), np.ascontiguousarray(triples, dtype=np.int32), min_edges
    )


def connector_counts_numba(adj: np.ndarray, min_edges: int = 3) -> np.ndarray:
    n = adj.shape[0]
    if n < 5:
        return np.zeros((n, n), dtype=np.int64)
    # the product itself goes to BLAS, which beats a compiled triple loop
    return _gram(triple_link_numba(adj, combinations_array(n, 3), min_edges))


# ---------------------------------------------------------------- dispatch


def quad_edge_counts(adj: np.ndarray, quads: np.ndarray) -> np.ndarray:
    """Number of edges spanned by each 4-set row of ``quads``."""
    if quads.shape[0] == 0:
        return np.zeros(0, dtype=np.int8)
    if _backend == "numba":
        return quad_edge_counts_numba(adj, quads)
    return quad_edge_counts_numpy(adj, quads)


def triple_link(adj: np.ndarray, triples: np.ndarray, min_edges: int = 3) -> np.ndarray:
    if _backend == "numba":
        return triple_link_numba(adj, triples, min_edges)
    return triple_link_numpy(adj, triples, min_edges)


def connector_counts(adj: np.ndarray, min_edges: int = 3) -> np.ndarray:
    """Length-1 connector counts for every ordered vertex pair.

    Entry (x, y) counts 3-sets S avoiding x and y such that both S + x and
    S + y span at least ``min_edges`` edges. The diagonal is zero.
    """
    if _backend == "numba":
        return connector_counts_numba(adj, min_edges)
    return connector_counts_numpy(adj, min_edges)
