"""Immutable 3-uniform hypergraphs and the queries every other module builds on."""
from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, combinations_with_replacement, permutations

import numpy as np

from . import kernels
from .errors import DegenerateTriple, DuplicateEdge, OutOfRange, TooLarge, TooSmall, UnlabelledVertex

MAX_VERTICES = 128

Triple = tuple[int, int, int]
Quad = tuple[int, int, int, int]


@dataclass(frozen=True)
class Pattern4:
    """A 3-graph on four vertices.

    On four points any two k-edge 3-graphs are isomorphic (an edge is fixed by
    the one vertex it misses), so a 4-set contains a copy of the pattern
    exactly when it spans at least ``edge_count`` edges.
    """

    name: str
    edge_count: int
    triples: tuple[Triple, ...]

    def spans(self, induced_edges: int) -> bool:
        return induced_edges >= self.edge_count


_ALL_TRIPLES = tuple(combinations(range(4), 3))
K4 = Pattern4("k4", 4, _ALL_TRIPLES)
K4_MINUS = Pattern4("k4m", 3, _ALL_TRIPLES[:3])
K4_MINUS_2E = Pattern4("k4m2e", 2, _ALL_TRIPLES[:2])
K4_MINUS_3E = Pattern4("k4m3e", 1, _ALL_TRIPLES[:1])
PATTERNS = {p.name: p for p in (K4, K4_MINUS, K4_MINUS_2E, K4_MINUS_3E)}


def pattern_by_name(name: str) -> Pattern4:
    try:
        return PATTERNS[name]
    except KeyError:
        raise ValueError(f"unknown pattern {name!r}; expected one of {sorted(PATTERNS)}") from None


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> list[int]:
    """Vertices of a bitmask in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True, eq=False)
class Hypergraph3:
    """Vertices ``0..n-1`` and a set of unordered triples.

    Build through :func:`from_edge_list`; the constructor trusts its inputs.
    ``adj`` is the symmetric boolean cube, so ``adj[u, v]`` is the pair
    neighbourhood N(u, v) as a dense bit vector.
    """

    n: int
    edges: tuple[Triple, ...]
    adj: np.ndarray = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph3):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Triple]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int, w: int) -> bool:
        return bool(self.adj[u, v, w])

    @cached_property
    def codegrees(self) -> np.ndarray:
        return self.adj.sum(axis=2, dtype=np.int64)

    def pair_nbhd(self, u: int, v: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.adj[u, v]).tolist())

    @cached_property
    def pair_bits(self) -> list[list[int]]:
        """``pair_bits[u][v]`` is N(u, v) as a Python int bitmask."""
        n = self.n
        packed = np.packbits(self.adj, axis=2, bitorder="little")
        rows = [[0] * n for _ in range(n)]
        for u in range(n):
            for v in range(u + 1, n):
                rows[u][v] = rows[v][u] = int.from_bytes(packed[u, v].tobytes(), "little")
        return rows

    @cached_property
    def quad_counts(self) -> np.ndarray:
        """Edges spanned by each 4-set, aligned with ``combinations_array(n, 4)``."""
        if self.n < 4:
            return np.zeros(0, dtype=np.int8)
        return kernels.quad_edge_counts(self.adj, kernels.combinations_array(self.n, 4))

    @cached_property
    def _copy_cache(self) -> dict:
        return {}

    def copy_masks(self, p: Pattern4) -> list[int]:
        """Bitmasks of all 4-sets spanning ``p``, lexicographic order."""
        key = ("masks", p.name)
        if key not in self._copy_cache:
            self._copy_cache[key] = [_mask(q) for q in pattern_copies(self, p)]
        return self._copy_cache[key]

    def copy_mask_set(self, p: Pattern4) -> frozenset[int]:
        key = ("maskset", p.name)
        if key not in self._copy_cache:
            self._copy_cache[key] = frozenset(self.copy_masks(p))
        return self._copy_cache[key]

    def induced(self, vertices: Iterable[int]) -> tuple["Hypergraph3", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns new-to-old labels."""
        keep = sorted(set(vertices))
        sub = self.adj[np.ix_(keep, keep, keep)]
        k = len(keep)
        if k >= 3:
            tri = kernels.combinations_array(k, 3)
            hit = sub[tri[:, 0], tri[:, 1], tri[:, 2]]
            edges = tuple(tuple(int(x) for x in row) for row in tri[hit])
        else:
            edges = ()
        return Hypergraph3(k, edges, np.ascontiguousarray(sub)), keep


def _cube(n: int, edges: Sequence[Triple]) -> np.ndarray:
    adj = np.zeros((n, n, n), dtype=bool)
    if edges:
        arr = np.asarray(edges, dtype=np.intp)
        for p in permutations(range(3)):
            adj[arr[:, p[0]], arr[:, p[1]], arr[:, p[2]]] = True
    return adj


def from_edge_list(n: int, triples: Iterable[Iterable[int]]) -> Hypergraph3:
    """Validate and build a hypergraph; duplicates are rejected, not merged."""
    if n < 1:
        raise TooSmall(f"need at least one vertex, got n={n}")
    if n > MAX_VERTICES:
        raise TooLarge(f"n={n} exceeds the vertex cap {MAX_VERTICES}")
    seen: set[Triple] = set()
    for raw in triples:
        t = tuple(int(v) for v in raw)
        if len(t) != 3:
            raise DegenerateTriple(f"edge {t} does not have three vertices")
        for v in t:
            if not 0 <= v < n:
                raise OutOfRange(f"vertex {v} of edge {t} outside 0..{n - 1}")
        key = tuple(sorted(t))
        if key[0] == key[1] or key[1] == key[2]:
            raise DegenerateTriple(f"edge {t} repeats a vertex")
        if key in seen:
            raise DuplicateEdge(f"edge {key} listed twice")
        seen.add(key)
    edges = tuple(sorted(seen))
    return Hypergraph3(n, edges, _cube(n, edges))


def _check_triple(h: Hypergraph3, t: Iterable[int]) -> Triple:
    key = tuple(sorted(int(v) for v in t))
    if len(key) != 3 or len(set(key)) != 3:
        raise DegenerateTriple(f"{tuple(t)} is not a 3-set")
    for v in key:
        if not 0 <= v < h.n:
            raise OutOfRange(f"vertex {v} outside 0..{h.n - 1}")
    return key


def min_codegree(h: Hypergraph3) -> int:
    """delta_2(H): the smallest pair neighbourhood."""
    if h.n < 2:
        raise TooSmall("codegree needs at least two vertices")
    iu = np.triu_indices(h.n, k=1)
    return int(h.codegrees[iu].min())


def link_L(h: Hypergraph3, t: Iterable[int]) -> frozenset[int]:
    """Vertices v outside ``t`` such that ``t + v`` spans a K4 minus an edge."""
    key = _check_triple(h, t)
    row = kernels.triple_link(h.adj, np.asarray([key], dtype=np.int32), 3)[0]
    return frozenset(np.flatnonzero(row).tolist())


def link_mask(h: Hypergraph3, t: Iterable[int]) -> int:
    """Bitmask form of :func:`link_L` from pair neighbourhoods.

    For an edge this is the set of vertices lying in at least two of the three
    pair neighbourhoods; for a non-edge all three are needed.
    """
    a, b, c = _check_triple(h, t)
    pb = h.pair_bits
    ab, ac, bc = pb[a][b], pb[a][c], pb[b][c]
    if h.adj[a, b, c]:
        m = (ab & ac) | (ab & bc) | (ac & bc)
    else:
        m = ab & ac & bc
    return m & ~((1 << a) | (1 << b) | (1 << c))


def pattern_copies(h: Hypergraph3, p: Pattern4) -> list[Quad]:
    """All 4-sets spanning a copy of ``p``, in lexicographic order."""
    key = ("quads", p.name)
    cache = h._copy_cache
    if key not in cache:
        if h.n < 4:
            cache[key] = []
        else:
            quads = kernels.combinations_array(h.n, 4)
            hit = quads[h.quad_counts >= p.edge_count]
            cache[key] = [tuple(int(x) for x in row) for row in hit]
    return list(cache[key])


def edge_extension_check(h: Hypergraph3) -> tuple[bool, Triple | None, float | None]:
    """Check |L(e)| >= (3 delta_2 - n) / 2 on every edge.

    Returns ``(holds, worst_edge, min_slack)``; the last two are ``None`` for an
    edgeless hypergraph.
    """
    if not h.edges:
        return True, None, None
    bound = (3 * min_codegree(h) - h.n) / 2
    sizes = kernels.triple_link(h.adj, np.asarray(h.edges, dtype=np.int32), 3).sum(axis=1)
    worst = int(np.argmin(sizes))
    slack = float(sizes[worst] - bound)
    return slack >= 0, h.edges[worst], slack


@dataclass
class PartitionStats:
    labels: dict[int, str]
    edge_counts: dict[str, int]
    pattern_counts: dict[str, int]


def type_of(vertices: Iterable[int], labels: Mapping[int, str]) -> str:
    return "".join(sorted(labels[v] for v in vertices))


def _normalize_labels(h: Hypergraph3, labels) -> dict[int, str]:
    if isinstance(labels, Mapping):
        out = {int(v): str(lab) for v, lab in labels.items()}
    else:
        out = {v: str(lab) for v, lab in enumerate(labels)}
    missing = [v for v in range(h.n) if v not in out]
    if missing:
        raise UnlabelledVertex(f"vertices without a class label: {missing[:10]}")
    if len(set(out.values())) > 3:
        raise ValueError("at most three classes are supported")
    return out


def partition_stats(h: Hypergraph3, labels, p: Pattern4 = K4_MINUS) -> PartitionStats:
    """Edge counts per type and pattern-spanning 4-set counts per type.

    ``labels`` is a sequence indexed by vertex or a vertex-to-label mapping;
    labels are single characters in practice ("A", "B", ...).
    """
    lab = _normalize_labels(h, labels)
    classes = sorted(set(lab.values()))
    edge_counts = {"".join(c): 0 for c in combinations_with_replacement(classes, 3)}
    pattern_counts = {"".join(c): 0 for c in combinations_with_replacement(classes, 4)}
    codes = np.array([classes.index(lab[v]) for v in range(h.n)], dtype=np.int64)

    def tally(rows: np.ndarray, k: int, into: dict[str, int]) -> None:
        if rows.size == 0:
            return
        # sorted class codes of each row, packed base-4
        key = np.sort(codes[rows], axis=1) @ (4 ** np.arange(k - 1, -1, -1))
        uniq, counts = np.unique(key, return_counts=True)
        for u, cnt in zip(uniq.tolist(), counts.tolist()):
            digits = [(u // 4**i) % 4 for i in range(k - 1, -1, -1)]
            into["".join(classes[d] for d in digits)] += cnt

    tally(np.asarray(h.edges, dtype=np.intp).reshape(-1, 3), 3, edge_counts)
    if h.n >= 4:
        quads = kernels.combinations_array(h.n, 4)
        tally(quads[h.quad_counts >= p.edge_count], 4, pattern_counts)
    return PartitionStats(lab, edge_counts, pattern_counts)
