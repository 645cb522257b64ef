"""Generators for the named hypergraph families.

Vertex numbering is fixed so that isomorphism checks are plain relabellings:

* ``h_ab(a, b)``: A = 0..a-1, B = a..a+b-1.
* ``h_l(n, l)``: A = v_1..v_{n/2-1} -> 0..n/2-2, B = w_1..w_{n/2} -> n/2-1..n-2,
  and z -> n-1.
"""
from __future__ import annotations

import os
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import kernels
from .errors import BadL, BadModulus, IncompleteOrientation, TooSmall
from .hypergraph import Hypergraph3, from_edge_list

SEED_ENV = "HYPERTILE_SEED"
DEFAULT_SEED = 0


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


def _from_mask(n: int, keep: np.ndarray) -> Hypergraph3:
    if n < 3:
        return from_edge_list(n, [])
    tri = kernels.combinations_array(n, 3)
    return from_edge_list(n, tri[keep].tolist())


def complete_3graph(n: int) -> Hypergraph3:
    if n < 1:
        raise TooSmall("n must be positive")
    return _from_mask(n, np.ones(comb(n, 3), dtype=bool))


def h_ab(a: int, b: int) -> Hypergraph3:
    """Edges are exactly the triples with an odd number of B-vertices (AAB or BBB)."""
    if a < 0 or b < 0 or a + b < 3:
        raise TooSmall(f"h_ab needs a, b >= 0 and a + b >= 3, got ({a}, {b})")
    n = a + b
    tri = kernels.combinations_array(n, 3)
    in_b = (tri >= a).sum(axis=1)
    return _from_mask(n, in_b % 2 == 1)


def h_l(n: int, l: int) -> Hypergraph3:
    if n % 4 or n % 3 != 1:
        raise BadModulus(f"h_l needs 4 | n and n = 1 mod 3, got n={n}")
    if n < 16:
        raise TooSmall(f"h_l needs n >= 16, got n={n}")
    half = n // 2
    if not 1 <= l <= half:
        raise BadL(f"l must lie in 1..{half}, got {l}")
    n_a = half - 1
    v = lambda i: i - 1  # noqa: E731  1-indexed v_i
    w = lambda j: n_a + j - 1  # noqa: E731  1-indexed w_j
    z = n - 1

    base = h_ab(n_a, half)
    edges = list(base.edges)
    for i in range(1, n_a + 1):
        for j in range(i + 1, n_a + 1):
            if i < min(j, l):
                edges.append((v(i), v(j), z))
    for i in range(1, half + 1):
        for j in range(i + 1, half + 1):
            if i < min(j, l):
                edges.append((w(i), w(j), z))
    for i in range(1, n_a + 1):
        for j in range(1, half + 1):
            if l <= min(i, j):
                edges.append((v(i), w(j), z))
    return from_edge_list(n, edges)


Orientation = np.ndarray | Mapping | Callable[[int, int], int]


def _beats_matrix(n: int, orientation: Orientation) -> np.ndarray:
    beats = np.zeros((n, n), dtype=bool)
    if isinstance(orientation, np.ndarray):
        o = orientation.astype(bool)
        if o.shape != (n, n):
            raise IncompleteOrientation(f"orientation matrix must be {n}x{n}")
        for u in range(n):
            for v in range(u + 1, n):
                if o[u, v] == o[v, u]:
                    raise IncompleteOrientation(f"pair ({u}, {v}) is not oriented exactly one way")
        return o.copy()
    for u in range(n):
        for v in range(u + 1, n):
            if callable(orientation):
                winner = orientation(u, v)
            else:
                winner = orientation.get((u, v), orientation.get((v, u)))
            if winner not in (u, v):
                raise IncompleteOrientation(f"pair ({u}, {v}) has no valid winner")
            if winner == u:
                beats[u, v] = True
            else:
                beats[v, u] = True
    return beats


def random_tournament(n: int, seed: int | None = None) -> np.ndarray:
    """``beats[u, v]`` is True iff the arc goes u -> v."""
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    iu, ju = np.triu_indices(n, k=1)
    flip = rng.random(iu.size) < 0.5
    beats = np.zeros((n, n), dtype=bool)
    beats[iu[flip], ju[flip]] = True
    beats[ju[~flip], iu[~flip]] = True
    return beats


def tournament_triangles(n: int, orientation: Orientation) -> Hypergraph3:
    """Triples whose three arcs form a directed 3-cycle.

    ``orientation`` is an ``n x n`` boolean ``beats`` matrix, a mapping from
    pairs to the winner, or a callable ``(u, v) -> winner``.
    """
    beats = _beats_matrix(n, orientation)
    if n < 3:
        return from_edge_list(n, [])
    a, b, c = kernels.combinations_array(n, 3).T
    cyclic = (beats[a, b] & beats[b, c] & beats[c, a]) | (beats[b, a] & beats[c, b] & beats[a, c])
    return _from_mask(n, cyclic)


def random_3graph(n: int, p: float, seed: int | None = None) -> Hypergraph3:
    """Binomial random 3-graph; triples drawn in lexicographic order from PCG64."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    return _from_mask(n, rng.random(comb(n, 3)) < p)


@dataclass
class ConstructionSpec:
    kind: str
    parameters: dict = field(default_factory=dict)

    _KINDS = {
        "hab": ("a", "b"),
        "hl": ("n", "l"),
        "tour": ("n", "seed"),
        "rand": ("n", "p", "seed"),
        "complete": ("n",),
    }

    @classmethod
    def parse(cls, text: str) -> "ConstructionSpec":
        """Parse ``kind:key=value,...`` such as ``hab:a=4,b=4`` or ``rand:n=30,p=0.75,seed=1``."""
        kind, _, rest = text.strip().partition(":")
        if kind not in cls._KINDS:
            raise ValueError(f"unknown construction {kind!r}; expected one of {sorted(cls._KINDS)}")
        params: dict = {}
        for item in filter(None, rest.split(",")):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"bad parameter {item!r} in {text!r}")
            key = key.strip()
            params[key] = float(value) if key == "p" else int(value)
        required = set(cls._KINDS[kind]) - ({"seed"} if kind in ("tour", "rand") else set())
        missing = required - params.keys()
        extra = params.keys() - set(cls._KINDS[kind])
        if missing or extra:
            raise ValueError(f"{kind}: missing {sorted(missing)}, unexpected {sorted(extra)}")
        return cls(kind, params)

    def build(self) -> Hypergraph3:
        p = self.parameters
        if self.kind == "hab":
            return h_ab(p["a"], p["b"])
        if self.kind == "hl":
            return h_l(p["n"], p["l"])
        if self.kind == "tour":
            n = p["n"]
            return tournament_triangles(n, random_tournament(n, p.get("seed")))
        if self.kind == "rand":
            return random_3graph(p["n"], p["p"], p.get("seed"))
        return complete_3graph(p["n"])


def build(spec: str) -> Hypergraph3:
    return ConstructionSpec.parse(spec).build()
