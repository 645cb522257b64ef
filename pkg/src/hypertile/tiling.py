"""Weighted local search for many disjoint copies of K4 minus an edge.

A tiling holds disjoint K4^- copies (``t1``) and bare edges (``t2``) and is
scored ``5|t1| + 2|t2|``. :func:`greedy_tile` applies weight-increasing
exchange moves until it has ``l`` copies or none applies. When
delta_2 > (n + 2l - 2)/3 and l <= (n - 13)/4, a tiling with no applicable
move always has at least ``l`` copies, so getting stuck there means the
implementation is wrong; such runs are written out as counterexamples.
"""
from __future__ import annotations

import enum
import json
import logging
import os
import warnings
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CounterexampleWarning, InvalidTiling
from .hypergraph import K4_MINUS, Hypergraph3, Quad, Triple, _mask, bits, link_mask, min_codegree

log = logging.getLogger(__name__)

COUNTEREXAMPLE_ENV = "HYPERTILE_COUNTEREXAMPLE_DIR"


class MoveKind(str, enum.Enum):
    ADD_COPY = "ADD_COPY"
    ADD_EDGE = "ADD_EDGE"
    EXTEND_EDGE = "EXTEND_EDGE"
    UPGRADE_TWO_EDGES = "UPGRADE_TWO_EDGES"
    SPLIT_EDGE_FOR_PAIRS = "SPLIT_EDGE_FOR_PAIRS"
    SPLIT_COPY_FOR_PAIRS = "SPLIT_COPY_FOR_PAIRS"


@dataclass(frozen=True)
class MoveRecord:
    kind: MoveKind
    removed: tuple[tuple[int, ...], ...]
    added: tuple[tuple[int, ...], ...]
    delta_w: int

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind.value,
            "removed": [list(x) for x in self.removed],
            "added": [list(x) for x in self.added],
            "delta_w": self.delta_w,
        }


@dataclass(frozen=True)
class Tiling:
    t1: tuple[Quad, ...] = ()
    t2: tuple[Triple, ...] = ()

    @property
    def weight(self) -> int:
        return weight(self)

    @property
    def copy_mask(self) -> int:
        return _mask(v for s in self.t1 for v in s)

    @property
    def vertex_mask(self) -> int:
        return self.copy_mask | _mask(v for e in self.t2 for v in e)

    def apply(self, move: MoveRecord) -> "Tiling":
        gone = set(move.removed)
        t1 = [s for s in self.t1 if s not in gone]
        t2 = [e for e in self.t2 if e not in gone]
        for part in move.added:
            (t1 if len(part) == 4 else t2).append(part)
        return Tiling(tuple(t1), tuple(t2))

    def to_json_obj(self) -> dict:
        return {"t1": [list(s) for s in self.t1], "t2": [list(e) for e in self.t2], "weight": self.weight}


def weight(t: Tiling) -> int:
    return 5 * len(t.t1) + 2 * len(t.t2)


def validate_tiling(h: Hypergraph3, t: Tiling) -> None:
    seen = 0
    for part in (*t.t1, *t.t2):
        if list(part) != sorted(set(part)) or any(not 0 <= v < h.n for v in part):
            raise InvalidTiling(f"{part} is not a sorted set of vertices")
        m = _mask(part)
        if m & seen:
            raise InvalidTiling(f"{part} overlaps another member")
        seen |= m
    for s in t.t1:
        if _mask(s) not in h.copy_mask_set(K4_MINUS):
            raise InvalidTiling(f"{s} does not span K4^-")
    for e in t.t2:
        if e not in h.edge_set:
            raise InvalidTiling(f"{e} is not an edge")


def max_bipartite_matching(adjacency: Iterable[tuple[Hashable, Hashable]]) -> dict:
    """Maximum matching by augmenting paths; returns ``{left: right}``.

    Lefts are tried in sorted order and their neighbours in input order, so the
    result is deterministic.
    """
    nbrs: dict = {}
    for left, right in adjacency:
        nbrs.setdefault(left, [])
        if right not in nbrs[left]:
            nbrs[left].append(right)
    owner: dict = {}

    def augment(left, seen: set) -> bool:
        for right in nbrs[left]:
            if right in seen:
                continue
            seen.add(right)
            if right not in owner or augment(owner[right], seen):
                owner[right] = left
                return True
        return False

    for left in sorted(nbrs):
        augment(left, set())
    return {left: right for right, left in owner.items()}


def pairing_schedules(vertices: Sequence[int]) -> list[list[tuple[int, int]]]:
    """Consecutive pairing of the sorted vertices, then three fixed re-pairings."""
    u = sorted(vertices)
    k = len(u) - len(u) % 2
    u = u[:k]
    half = k // 2
    orders = [
        u,
        [u[i // 2 + (i % 2) * half] for i in range(k)],
        u[1:] + u[:1],
        [u[i // 2] if i % 2 == 0 else u[k - 1 - i // 2] for i in range(k)],
    ]
    out: list[list[tuple[int, int]]] = []
    for order in orders:
        pairs = [tuple(sorted((order[i], order[i + 1]))) for i in range(0, k, 2)]
        if pairs and pairs not in out:
            out.append(pairs)
    return out


def _sorted(*vs: int) -> tuple[int, ...]:
    return tuple(sorted(vs))


def _edge_masks(h: Hypergraph3) -> list[int]:
    cache = h._copy_cache
    if "edge_masks" not in cache:
        cache["edge_masks"] = [_mask(e) for e in h.edges]
    return cache["edge_masks"]


def find_improving_move(
    h: Hypergraph3, t: Tiling, copy_order: Sequence[int] | None = None, check: bool = True
) -> MoveRecord | None:
    """First applicable move in priority order, or None when ``t`` is locally maximal.

    Order: add a free copy (+5), add a free edge (+2), extend an edge by a
    vertex of its link (+3, or +1 when that vertex sits in another edge), trade
    a copy and two edges for two copies (+1), trade an edge for two edges
    through free vertex pairs (+2), trade a copy for three edges through free
    vertex pairs (+1).
    """
    if check:
        validate_tiling(h, t)
    covered = t.vertex_mask
    in_copies = t.copy_mask

    order = h.copy_masks(K4_MINUS) if copy_order is None else copy_order
    for m in order:
        if not m & covered:
            return MoveRecord(MoveKind.ADD_COPY, (), (tuple(bits(m)),), 5)

    for e, m in zip(h.edges, _edge_masks(h)):
        if not m & covered:
            return MoveRecord(MoveKind.ADD_EDGE, (), (e,), 2)

    links = [link_mask(h, e) for e in t.t2]
    for e, lk in zip(t.t2, links):
        free = lk & ~in_copies
        if not free:
            continue
        v = bits(free)[0]
        host = next((f for f in t.t2 if v in f), None)
        if host is None:
            return MoveRecord(MoveKind.EXTEND_EDGE, (e,), (_sorted(*e, v),), 3)
        return MoveRecord(MoveKind.EXTEND_EDGE, (e, host), (_sorted(*e, v),), 1)

    if len(t.t2) >= 2:
        for s in t.t1:
            matching = max_bipartite_matching(
                (i, v) for i, lk in enumerate(links) for v in s if lk >> v & 1
            )
            if len(matching) >= 2:
                (i, vi), (j, vj) = sorted(matching.items())[:2]
                ei, ej = t.t2[i], t.t2[j]
                return MoveRecord(
                    MoveKind.UPGRADE_TWO_EDGES, (s, ei, ej), (_sorted(*ei, vi), _sorted(*ej, vj)), 1
                )

    free_vertices = bits(((1 << h.n) - 1) & ~covered)
    if len(free_vertices) < 4:
        return None
    pb = h.pair_bits
    for pairs in pairing_schedules(free_vertices):
        for e in t.t2:
            matching = max_bipartite_matching(
                (k, v) for k, (x, y) in enumerate(pairs) for v in e if pb[x][y] >> v & 1
            )
            if len(matching) >= 2:
                chosen = sorted(matching.items())[:2]
                added = tuple(_sorted(*pairs[k], v) for k, v in chosen)
                return MoveRecord(MoveKind.SPLIT_EDGE_FOR_PAIRS, (e,), added, 2)
        if len(pairs) < 3:
            continue
        for s in t.t1:
            matching = max_bipartite_matching(
                (k, v) for k, (x, y) in enumerate(pairs) for v in s if pb[x][y] >> v & 1
            )
            if len(matching) >= 3:
                chosen = sorted(matching.items())[:3]
                added = tuple(_sorted(*pairs[k], v) for k, v in chosen)
                return MoveRecord(MoveKind.SPLIT_COPY_FOR_PAIRS, (s,), added, 1)
    return None


def guarantee_applies(h: Hypergraph3, l: int) -> bool:
    """Whether the codegree condition promises ``l`` disjoint copies."""
    return 0 <= l <= (h.n - 13) / 4 and h.n >= 2 and min_codegree(h) > (h.n + 2 * l - 2) / 3


def greedy_tile(
    h: Hypergraph3,
    l: int,
    seed: int | None = None,
    counterexample_dir: str | os.PathLike | None = None,
) -> tuple[Tiling, list[MoveRecord]]:
    """Improve from the empty tiling until it holds ``l`` copies or is stuck.

    ``seed`` shuffles the scan order of candidate copies; ``None`` keeps
    lexicographic order. Each step raises the weight by at least one and the
    weight never exceeds 5n/4, so at most 5n/4 + 1 steps are taken.
    """
    order = h.copy_masks(K4_MINUS)
    if seed is not None:
        perm = np.random.default_rng(seed).permutation(len(order))
        order = [order[i] for i in perm]
    t = Tiling()
    trace: list[MoveRecord] = []
    while len(t.t1) < l:
        move = find_improving_move(h, t, order, check=False)
        if move is None:
            break
        t = t.apply(move)
        trace.append(move)
    if len(t.t1) < l and guarantee_applies(h, l):
        _emit_counterexample(h, l, seed, t, trace, counterexample_dir)
    return t, trace


def _emit_counterexample(h, l, seed, t, trace, directory) -> None:
    from .formats import to_json_obj

    msg = f"local search stuck at {len(t.t1)} < {l} copies inside the guarantee region (n={h.n})"
    warnings.warn(msg, CounterexampleWarning, stacklevel=3)
    directory = directory or os.environ.get(COUNTEREXAMPLE_ENV)
    if not directory:
        return
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    payload = {
        "hypergraph": to_json_obj(h),
        "l": l,
        "seed": seed,
        "min_codegree": min_codegree(h),
        "tiling": t.to_json_obj(),
        "trace": [m.to_json_obj() for m in trace],
    }
    out = path / f"counterexample_n{h.n}_l{l}_seed{seed}.json"
    out.write_text(json.dumps(payload, indent=1))
    log.error("counterexample written to %s", out)


def trace_to_json_obj(t: Tiling, trace: Sequence[MoveRecord], l: int, seed: int | None) -> dict:
    weights = [0]
    for m in trace:
        weights.append(weights[-1] + m.delta_w)
    return {
        "l": l,
        "seed": seed,
        "tiling": t.to_json_obj(),
        "moves": [m.to_json_obj() for m in trace],
        "weights": weights,
    }
