"""Connectors, close neighbourhoods, the closed partition and bridge counts.

An (x, y)-connector of length i is a (4i - 1)-set S avoiding x and y such that
both S + x and S + y have K4^- factors; x and y are (i, eta)-close when there
are at least eta * n^(4i - 1) of them. Length 1 is counted exactly from the
triple-link matrix. Longer connectors are estimated by sampling (4i - 1)-sets
and running the exact factor check on both sides; estimates carry Wilson
score intervals.
"""
from __future__ import annotations

import enum
import logging
import math
import warnings
from collections.abc import Collection, Iterable
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import kernels
from .constructions import default_seed
from .errors import DegreeTooLow, HypothesisWarning, NotAPartition, SamplingBudgetZero
from .hypergraph import Hypergraph3, min_codegree
from .solver import factor_within

log = logging.getLogger(__name__)

DEFAULT_ETAS = (1e-3, 1e-6)
DEFAULT_SAMPLES = 64
WILSON_Z = 1.96


class Mode(str, enum.Enum):
    EXACT = "EXACT"
    SAMPLED = "SAMPLED"


@dataclass(frozen=True)
class ConnectorQuery:
    x: int
    y: int
    length: int = 1
    eta: float = DEFAULT_ETAS[0]
    mode: Mode = Mode.EXACT
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self):
        if self.x == self.y:
            raise ValueError("connector endpoints must differ")
        if self.length < 1:
            raise ValueError("connector length must be positive")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if self.mode is Mode.EXACT and self.length != 1:
            raise ValueError("exact counting is only available for length 1")


def connector_matrix(h: Hypergraph3) -> np.ndarray:
    """``C[x, y]`` = number of length-1 (x, y)-connectors; zero diagonal."""
    cache = h._copy_cache
    if "connectors1" not in cache:
        cache["connectors1"] = kernels.connector_counts(h.adj, 3)
    return cache["connectors1"]


def connectors_len1(h: Hypergraph3, x: int, y: int, return_sets: bool = False):
    """Count 3-sets S avoiding x, y with S + x and S + y both spanning K4^-.

    Returns ``(count, sets)``; ``sets`` is None unless ``return_sets``.
    """
    if x == y:
        raise ValueError("connector endpoints must differ")
    for v in (x, y):
        if not 0 <= v < h.n:
            raise ValueError(f"vertex {v} outside 0..{h.n - 1}")
    count = int(connector_matrix(h)[x, y])
    if not return_sets:
        return count, None
    if h.n < 5:
        return count, []
    tri = kernels.combinations_array(h.n, 3)
    ok = kernels.triple_link(h.adj, tri, 3)
    hit = ok[:, x] & ok[:, y]
    return count, [tuple(int(v) for v in row) for row in tri[hit]]


def wilson_interval(hits: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = hits / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class ConnectorEstimate:
    x: int
    y: int
    length: int
    population: int
    drawn: int
    hits: int
    threshold: float
    close: bool
    exact: bool

    @property
    def estimate(self) -> float:
        if self.exact:
            return float(self.hits)
        return self.population * self.hits / self.drawn if self.drawn else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        if self.exact:
            return float(self.hits), float(self.hits)
        lo, hi = wilson_interval(self.hits, self.drawn)
        return lo * self.population, hi * self.population

    def to_json_obj(self) -> dict:
        lo, hi = self.interval
        return {
            "x": self.x, "y": self.y, "length": self.length, "exact": self.exact,
            "drawn": self.drawn, "hits": self.hits, "estimate": self.estimate,
            "ci_low": lo, "ci_high": hi, "threshold": self.threshold, "close": self.close,
        }


def threshold(n: int, length: int, eta: float) -> float:
    return eta * float(n) ** (4 * length - 1)


def estimate_connectors(
    h: Hypergraph3, x: int, y: int, length: int, eta: float, samples: int = DEFAULT_SAMPLES, seed: int = 0
) -> ConnectorEstimate:
    """Decide (length, eta)-closeness of x and y by sampling (4i - 1)-sets.

    The verdict is ``hits >= ceil(threshold / population * samples)``; sampling
    stops as soon as that verdict is settled, which never changes it. Each
    unordered pair draws from its own stream seeded by ``(seed, i, x, y)``.
    """
    if samples < 1:
        raise SamplingBudgetZero("sampled closeness needs at least one sample")
    size = 4 * length - 1
    x, y = min(x, y), max(x, y)
    thr = threshold(h.n, length, eta)
    others = np.array([v for v in range(h.n) if v != x and v != y])
    population = comb(len(others), size)
    if population == 0:
        return ConnectorEstimate(x, y, length, 0, 0, 0, thr, thr <= 0, False)
    need = max(0, math.ceil(thr / population * samples - 1e-12))
    rng = np.random.default_rng([seed, length, x, y])
    hits = drawn = 0
    while drawn < samples and hits < need and hits + samples - drawn >= need:
        s = rng.choice(others, size, replace=False).tolist()
        drawn += 1
        if factor_within(h, s + [x]) is not None and factor_within(h, s + [y]) is not None:
            hits += 1
    return ConnectorEstimate(x, y, length, population, drawn, hits, thr, hits >= need, False)


@dataclass
class Neighborhood:
    x: int
    length: int
    eta: float
    members: frozenset[int]
    estimates: dict[int, ConnectorEstimate] = field(default_factory=dict)

    def __contains__(self, v) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)


def close_neighborhood(
    h: Hypergraph3,
    x: int,
    length: int = 1,
    eta: float = DEFAULT_ETAS[0],
    samples: int = DEFAULT_SAMPLES,
    seed: int | None = None,
    within: Collection[int] | None = None,
) -> Neighborhood:
    """Vertices y != x that are (length, eta)-close to x, optionally restricted to ``within``."""
    seed = default_seed() if seed is None else seed
    pool = range(h.n) if within is None else sorted(within)
    if length == 1:
        row = connector_matrix(h)[x]
        thr = threshold(h.n, 1, eta)
        members = frozenset(y for y in pool if y != x and row[y] >= thr)
        return Neighborhood(x, 1, eta, members)
    if samples < 1:
        raise SamplingBudgetZero("sampled closeness needs at least one sample")
    est = {y: estimate_connectors(h, x, y, length, eta, samples, seed) for y in pool if y != x}
    members = frozenset(y for y, e in est.items() if e.close)
    return Neighborhood(x, length, eta, members, est)


@dataclass(frozen=True)
class BridgeParams:
    eps1: float = 0.05
    eps3: float = 0.05
    eps4: float = 0.05

    def __post_init__(self):
        for name in ("eps1", "eps3", "eps4"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class BridgeStats:
    spread_edges: int
    balanced_k4: int
    xyy_edges_reaching_x: int
    xxy_edges_reaching_y: int
    bridges_len1: int

    def to_json_obj(self) -> dict:
        return {
            "spread_edges": self.spread_edges,
            "balanced_k4": self.balanced_k4,
            "xyy_edges_reaching_x": self.xyy_edges_reaching_x,
            "xxy_edges_reaching_y": self.xxy_edges_reaching_y,
            "bridges_len1": self.bridges_len1,
        }


def bridge_stats(
    h: Hypergraph3, x_side: Iterable[int], y_side: Iterable[int], eps: BridgeParams = BridgeParams()
) -> BridgeStats:
    """Exact counts of the four bridge-forcing structures between X and Y.

    * edges whose link meets both sides in at least eps1 * n vertices,
    * K4 copies split two and two,
    * XYY edges whose link meets X in at least eps3 * n vertices,
    * XXY edges whose link meets Y in at least eps4 * n vertices,

    plus the number of length-1 bridges (x, y, S) with x in X and y in Y.
    """
    xs, ys = set(x_side), set(y_side)
    if xs & ys or xs | ys != set(range(h.n)) or not xs or not ys:
        raise NotAPartition("X and Y must be non-empty and partition the vertex set")
    n = h.n
    in_x = np.zeros(n, dtype=bool)
    in_x[list(xs)] = True
    spread = xyy = xxy = 0
    if h.edges:
        edges = np.asarray(h.edges, dtype=np.int32)
        link = kernels.triple_link(h.adj, edges, 3)
        into_x = link[:, in_x].sum(axis=1)
        into_y = link[:, ~in_x].sum(axis=1)
        x_members = in_x[edges].sum(axis=1)
        spread = int(np.count_nonzero((into_x >= eps.eps1 * n) & (into_y >= eps.eps1 * n)))
        xyy = int(np.count_nonzero((x_members == 1) & (into_x >= eps.eps3 * n)))
        xxy = int(np.count_nonzero((x_members == 2) & (into_y >= eps.eps4 * n)))
    balanced = 0
    if n >= 4:
        quads = kernels.combinations_array(n, 4)
        full = quads[h.quad_counts == 4]
        balanced = int(np.count_nonzero(in_x[full].sum(axis=1) == 2))
    c = connector_matrix(h)
    bridges = int(c[np.ix_(in_x, ~in_x)].sum())
    return BridgeStats(spread, balanced, xyy, xxy, bridges)


@dataclass
class ClassRecord:
    label: str
    vertices: list[int]
    level: int
    origin: str
    size_bound: float | None

    def to_json_obj(self) -> dict:
        return {
            "label": self.label, "vertices": self.vertices, "size": len(self.vertices),
            "level": self.level, "origin": self.origin, "size_bound": self.size_bound,
        }


@dataclass
class ClosenessReport:
    n: int
    gamma: float
    etas: tuple[float, ...]
    samples: int
    seed: int
    min_codegree: int
    hypothesis_holds: bool
    classes: list[ClassRecord]
    residual: list[int]
    bridges: dict[str, BridgeStats]
    sampled: list[ConnectorEstimate]
    notes: list[str]

    @property
    def partition(self) -> list[set[int]]:
        return [set(c.vertices) for c in self.classes]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "gamma": self.gamma,
            "eta_schedule": list(self.etas),
            "samples": self.samples,
            "seed": self.seed,
            "min_codegree": self.min_codegree,
            "hypothesis_holds": self.hypothesis_holds,
            "classes": [c.to_json_obj() for c in self.classes],
            "residual": self.residual,
            "bridge_stats": {k: v.to_json_obj() for k, v in self.bridges.items()},
            "sampled_pairs": [e.to_json_obj() for e in self.sampled],
            "notes": self.notes,
        }


class _Closeness:
    """Memoized neighbourhood queries for one partition run."""

    def __init__(self, h: Hypergraph3, etas: tuple[float, ...], samples: int, seed: int):
        self.h = h
        self.etas = etas
        self.samples = samples
        self.seed = seed
        self.c1 = connector_matrix(h)
        self.pairs2: dict[tuple[int, int], ConnectorEstimate] = {}

    def n1(self, v: int, pool: set[int]) -> set[int]:
        thr = threshold(self.h.n, 1, self.etas[0])
        return {y for y in pool if y != v and self.c1[v, y] >= thr}

    def n2(self, v: int, pool: set[int]) -> set[int]:
        out = set()
        for y in sorted(pool):
            if y == v:
                continue
            key = (min(v, y), max(v, y))
            if key not in self.pairs2:
                self.pairs2[key] = estimate_connectors(
                    self.h, key[0], key[1], 2, self.etas[1], self.samples, self.seed
                )
            if self.pairs2[key].close:
                out.add(y)
        return out


def closed_partition(
    h: Hypergraph3,
    gamma: float = 0.1,
    eta_schedule: Iterable[float] = DEFAULT_ETAS,
    samples: int = DEFAULT_SAMPLES,
    seed: int | None = None,
    strict: bool = False,
) -> ClosenessReport:
    """Split V into at most three classes that are internally close.

    Each round works on the vertices R not yet classified. If every v in R has
    a level-2 neighbourhood in R of size at least (1 + gamma)|R|/2, R is one
    class. Otherwise, from the first v below that size, the seed U collects
    u in N1(v) with |N1(u) & N2(v)| >= (1/4 + gamma/3)n, and U grows by vertices
    with at least gamma*n/4 level-1 neighbours in the class until a growth
    step adds fewer than gamma*n/4 vertices. If U is empty (the codegree
    hypothesis fails), the class is seeded with v and N1(v) instead.
    Vertices left after three rounds are reported as ``residual``.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    seed = default_seed() if seed is None else seed
    etas = tuple(float(e) for e in eta_schedule)
    if len(etas) < 2:
        raise ValueError("eta_schedule needs values for lengths 1 and 2")
    if samples < 1:
        raise SamplingBudgetZero("closed_partition needs at least one sample per pair")
    n = h.n
    delta = min_codegree(h)
    notes: list[str] = []
    holds = delta >= (0.5 + gamma) * n
    if delta < n / 2 and strict:
        raise DegreeTooLow(f"delta_2 = {delta} < n/2 = {n / 2}")
    if not holds:
        msg = f"delta_2 = {delta} < (1/2 + gamma) n = {(0.5 + gamma) * n:g}; class guarantees do not apply"
        warnings.warn(msg, HypothesisWarning, stacklevel=2)
        notes.append(msg)

    close = _Closeness(h, etas, samples, seed)
    remaining = set(range(n))
    classes: list[ClassRecord] = []
    bound = (0.25 + 0.75 * gamma) * n if holds else None
    for label in "XYZ":
        if not remaining:
            break
        members, level, origin = _one_class(close, remaining, gamma, n, notes)
        classes.append(ClassRecord(label, sorted(members), level, origin, bound))
        remaining -= members
    residual = sorted(remaining)
    if residual:
        notes.append(f"{len(residual)} vertices left after three rounds")

    bridges = {}
    if len(classes) > 1:
        for c in classes:
            rest = set(range(n)) - set(c.vertices)
            bridges[f"{c.label}|rest"] = bridge_stats(h, c.vertices, rest)
    return ClosenessReport(
        n, gamma, etas, samples, seed, delta, holds, classes, residual, bridges,
        [close.pairs2[k] for k in sorted(close.pairs2)], notes,
    )


def _one_class(close: _Closeness, pool: set[int], gamma: float, n: int, notes: list[str]):
    small = None
    for v in sorted(pool):
        if len(close.n2(v, pool)) < (1 + gamma) * len(pool) / 2:
            small = v
            break
    if small is None:
        return set(pool), 4, "all-close"
    v = small
    n2v = close.n2(v, pool)
    seed_set = {u for u in close.n1(v, pool) if len(close.n1(u, pool) & n2v) >= (0.25 + gamma / 3) * n}
    origin = "grown"
    if not seed_set:
        seed_set = {v} | close.n1(v, pool)
        origin = "fallback"
        notes.append(f"empty seed set at v={v}; class seeded with v and its level-1 neighbourhood")
    members = set(seed_set)
    step = 0
    while True:
        step += 1
        grow = {u for u in pool - members if len(close.n1(u, members)) >= gamma * n / 4}
        members |= grow
        if len(grow) < gamma * n / 4:
            break
    return members, step + 2, origin
