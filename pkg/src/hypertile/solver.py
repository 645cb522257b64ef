"""Exact F-factor and maximum F-tiling search over pattern 4-sets.

The search is exact cover on vertex bitmasks. Each level keeps, for every
still-uncovered vertex, the candidate 4-sets that avoid everything chosen so
far; the parent's lists are left untouched, so backtracking is just
returning. Branching picks the uncovered vertex with the fewest candidates
(lowest index on ties). Failed remainders are memoized: whether a vertex set
can be tiled depends only on the set itself.

A budget cutoff raises :class:`BudgetExhausted`; ``NO_FACTOR`` is only ever
reported after the search space is exhausted.
"""
from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .errors import BudgetExhausted, TooLarge
from .hypergraph import K4_MINUS, Hypergraph3, Pattern4, Quad, _mask, bits, from_edge_list, min_codegree

DEFAULT_BUDGET = 5_000_000


class Status(str, enum.Enum):
    FACTOR_FOUND = "FACTOR_FOUND"
    NO_FACTOR = "NO_FACTOR"
    TILING_ONLY = "TILING_ONLY"


@dataclass
class FactorResult:
    status: Status
    tiles: list[Quad] = field(default_factory=list)
    nodes_explored: int = 0
    uncovered: list[int] = field(default_factory=list)
    optimal: bool | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "status": self.status.value,
            "tiles": [list(t) for t in self.tiles],
            "nodes": self.nodes_explored,
            "uncovered": list(self.uncovered),
        }
        if self.optimal is not None:
            obj["optimal"] = self.optimal
        return obj


def _tile(mask: int) -> Quad:
    return tuple(bits(mask))  # type: ignore[return-value]


def _vertex_lists(vertices: Iterable[int], cands: Iterable[int]) -> dict[int, list[int]]:
    lists: dict[int, list[int]] = {v: [] for v in sorted(vertices)}
    for c in cands:
        for v in bits(c):
            lists[v].append(c)
    return lists


class _Cover:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.failed: set[int] = set()

    def run(self, remaining: int, lists: dict[int, list[int]]) -> list[int] | None:
        if remaining == 0:
            return []
        if remaining in self.failed:
            return None
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(f"exact cover exceeded {self.budget} nodes", self.nodes)
        pivot = min(lists, key=lambda v: len(lists[v]))
        for c in lists[pivot]:
            rest = remaining & ~c
            if rest in self.failed:
                continue
            child = {}
            for v, options in lists.items():
                if c >> v & 1:
                    continue
                kept = [d for d in options if not d & c]
                if not kept:
                    break
                child[v] = kept
            else:
                found = self.run(rest, child)
                if found is not None:
                    return [c, *found]
                continue
            self.failed.add(rest)
        self.failed.add(remaining)
        return None


def exact_cover(vertices: Iterable[int], cands: Iterable[int], budget: int = DEFAULT_BUDGET) -> tuple[list[int] | None, int]:
    """Partition ``vertices`` into candidate masks; returns ``(masks or None, nodes)``."""
    verts = sorted(set(vertices))
    target = _mask(verts)
    lists = _vertex_lists(verts, (c for c in cands if c & ~target == 0))
    if any(not opts for opts in lists.values()):
        return None, 0
    search = _Cover(budget)
    return search.run(target, lists), search.nodes


def find_factor(h: Hypergraph3, p: Pattern4 = K4_MINUS, budget: int = DEFAULT_BUDGET) -> FactorResult:
    """Decide whether ``h`` has a ``p``-factor by complete search."""
    if h.n % 4:
        return FactorResult(Status.NO_FACTOR)
    masks, nodes = exact_cover(range(h.n), h.copy_masks(p), budget)
    if masks is None:
        return FactorResult(Status.NO_FACTOR, nodes_explored=nodes)
    return FactorResult(Status.FACTOR_FOUND, sorted(_tile(m) for m in masks), nodes)


def factor_within(
    h: Hypergraph3, vertices: Iterable[int], p: Pattern4 = K4_MINUS, budget: int = DEFAULT_BUDGET
) -> list[Quad] | None:
    """A ``p``-factor of the induced subgraph on ``vertices``, or None if there is none."""
    verts = sorted(set(vertices))
    if len(verts) % 4:
        return None
    if not verts:
        return []
    target = _mask(verts)
    copies = h.copy_mask_set(p)
    if comb(len(verts), 4) < len(copies):
        cands = [m for m in (_mask(q) for q in combinations(verts, 4)) if m in copies]
    else:
        cands = [c for c in h.copy_masks(p) if c & ~target == 0]
    masks, _ = exact_cover(verts, cands, budget)
    if masks is None:
        return None
    return sorted(_tile(m) for m in masks)


class _Packer:
    """Branch on the scarcest vertex: cover it with one of its candidates, or drop it."""

    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        # smallest tile count proven unreachable from a live vertex set
        self.fail: dict[int, int] = {}

    def run(self, live: int, lists: dict[int, list[int]], need: int) -> list[int] | None:
        if need <= 0:
            return []
        if len(lists) < 4 * need or self.fail.get(live, need + 1) <= need:
            return None
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(f"tiling search exceeded {self.budget} nodes", self.nodes)
        pivot = min(lists, key=lambda v: len(lists[v]))
        for c in lists[pivot]:
            child, child_live = self._restrict(lists, c)
            found = self.run(child_live, child, need - 1)
            if found is not None:
                return [c, *found]
        child, child_live = self._restrict(lists, 1 << pivot)
        found = self.run(child_live, child, need)
        if found is not None:
            return found
        self.fail[live] = min(self.fail.get(live, need), need)
        return None

    @staticmethod
    def _restrict(lists: dict[int, list[int]], removed: int) -> tuple[dict[int, list[int]], int]:
        child = {}
        live = 0
        for v, options in lists.items():
            if removed >> v & 1:
                continue
            kept = [d for d in options if not d & removed]
            if kept:
                child[v] = kept
                live |= 1 << v
        return child, live


def max_tiling(
    h: Hypergraph3, p: Pattern4 = K4_MINUS, target: int | None = None, budget: int = DEFAULT_BUDGET
) -> FactorResult:
    """At least ``target`` disjoint copies of ``p`` if they exist, else a proven maximum.

    ``optimal`` is True when the returned tile count is certified maximum.
    """
    cap = h.n // 4
    if target is None:
        target = cap
    if not 0 <= target <= cap:
        raise ValueError(f"target must lie in 0..{cap}, got {target}")
    lists = {v: opts for v, opts in _vertex_lists(range(h.n), h.copy_masks(p)).items() if opts}
    live = _mask(lists)
    packer = _Packer(budget)
    found = packer.run(live, lists, target)
    optimal = False
    if found is None:
        optimal = True
        for k in range(target - 1, -1, -1):
            found = packer.run(live, lists, k)
            if found is not None:
                break
    elif target == cap:
        optimal = True
    tiles = sorted(_tile(m) for m in found)
    covered = _mask(v for t in tiles for v in t)
    uncovered = [v for v in range(h.n) if not covered >> v & 1]
    status = Status.FACTOR_FOUND if not uncovered and h.n % 4 == 0 else Status.TILING_ONLY
    return FactorResult(status, tiles, packer.nodes, uncovered, optimal)


def verify_tiling(h: Hypergraph3, p: Pattern4, tiles: Sequence[Sequence[int]]) -> bool:
    """Independent check: tiles are disjoint 4-sets and each spans ``p``."""
    seen: set[int] = set()
    for tile in tiles:
        t = [int(v) for v in tile]
        if len(t) != 4 or len(set(t)) != 4:
            return False
        if any(not 0 <= v < h.n for v in t) or seen.intersection(t):
            return False
        seen.update(t)
        spanned = sum(h.has_edge(*tri) for tri in combinations(t, 3))
        if not p.spans(spanned):
            return False
    return True


def brute_force_threshold(n: int, p: Pattern4 = K4_MINUS) -> int:
    """Least d such that every 3-graph on n vertices with delta_2 >= d has a p-factor.

    Full enumeration of all 2^C(n,3) hypergraphs, so only n = 4 is accepted.
    """
    if n > 4:
        raise TooLarge(f"full enumeration is limited to n = 4, got n={n}")
    if n != 4:
        raise ValueError("threshold enumeration needs n = 4")
    triples = list(combinations(range(n), 3))
    # worst offender per codegree: no factor and largest delta_2
    worst_without_factor = -1
    for bitset in range(1 << len(triples)):
        edges = [t for i, t in enumerate(triples) if bitset >> i & 1]
        h = from_edge_list(n, edges)
        if find_factor(h, p).status is not Status.FACTOR_FOUND:
            worst_without_factor = max(worst_without_factor, min_codegree(h))
    return worst_without_factor + 1
