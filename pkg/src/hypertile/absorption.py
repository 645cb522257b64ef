"""Absorbing sets and the absorb-then-tile factor pipeline.

An m-set A absorbs a disjoint 4-set T when both H[A] and H[A + T] have K4^-
factors. A family of disjoint, self-factorable m-sets is sampled; the tiler
covers most of H - U; the leftover W is cut into 4-blocks and each block is
absorbed by its own member of the family.
"""
from __future__ import annotations

import logging
import time
import warnings
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from .constructions import default_seed
from .errors import (
    BadSize, BudgetExhausted, HypertileError, HypothesisWarning, NoAbsorberLeft, Overlap,
    SampleCountZero, TooSmall,
)
from .hypergraph import K4_MINUS, Hypergraph3, Quad, min_codegree
from .solver import DEFAULT_BUDGET, factor_within, verify_tiling
from .tiling import greedy_tile

log = logging.getLogger(__name__)


def absorber_size(i: int) -> int:
    return 12 * i


def is_absorbing(h: Hypergraph3, a: Iterable[int], t: Iterable[int], budget: int = DEFAULT_BUDGET) -> bool:
    """Both H[a] and H[a + t] have K4^- factors."""
    a, t = set(a), set(t)
    if len(t) != 4 or not a or len(a) % 4:
        raise BadSize(f"need |t| = 4 and 4 | |a| > 0, got |a|={len(a)}, |t|={len(t)}")
    if a & t:
        raise Overlap(f"absorber and 4-set share {sorted(a & t)}")
    return factor_within(h, a, budget=budget) is not None and factor_within(h, a | t, budget=budget) is not None


@dataclass(frozen=True)
class AbsorberParams:
    i: int = 1
    eta: float = 0.1
    seed: int | None = None
    override_count: int | None = None
    probe_count: int = 8
    budget: int = DEFAULT_BUDGET


@dataclass
class AbsorberFamily:
    m: int
    members: list[tuple[int, ...]]
    factors: list[list[Quad]]
    params: AbsorberParams
    seed: int
    p: float
    expected_count: float
    drawn: int
    discarded_overlap: int
    discarded_unfactorable: int
    coverage: list[tuple[Quad, int]] = field(default_factory=list)

    @property
    def union(self) -> list[int]:
        return sorted(v for a in self.members for v in a)

    def absorbers_of(self, h: Hypergraph3, t: Iterable[int]) -> list[int]:
        """Indices of members absorbing ``t``."""
        t = set(t)
        return [k for k, a in enumerate(self.members) if not t & set(a) and is_absorbing(h, a, t, self.params.budget)]

    def to_json_obj(self) -> dict:
        return {
            "m": self.m,
            "members": [list(a) for a in self.members],
            "u_size": len(self.union),
            "seed": self.seed,
            "p": self.p,
            "expected_count": self.expected_count,
            "drawn": self.drawn,
            "discarded_overlap": self.discarded_overlap,
            "discarded_unfactorable": self.discarded_unfactorable,
            "coverage": [{"four_set": list(t), "absorbers": c} for t, c in self.coverage],
            "params": asdict(self.params),
        }


def sample_absorber_family(h: Hypergraph3, params: AbsorberParams = AbsorberParams()) -> AbsorberFamily:
    """Draw random m-sets, keeping those disjoint from earlier keeps and self-factorable.

    Each of the C(n, m) m-sets is chosen with probability
    p = eta^4 n / (2^7 m^2 C(n, m)), so the draw count is Poisson with mean
    eta^4 n / (2^7 m^2). That mean is far below one at small n, which raises
    :class:`SampleCountZero`; ``override_count`` fixes the number of draws.
    """
    m = absorber_size(params.i)
    n = h.n
    if n < m + 16:
        raise TooSmall(f"absorber sampling needs n >= m + 16 = {m + 16}, got n={n}")
    seed = default_seed() if params.seed is None else params.seed
    rng = np.random.default_rng([seed, params.i])
    expected = params.eta**4 * n / (2**7 * m * m)
    p = expected / comb(n, m)
    if params.override_count is None:
        if expected < 1:
            raise SampleCountZero(f"expected family size {expected:.3g} < 1 at n={n}, m={m}, eta={params.eta}")
        count = int(rng.poisson(expected))
    else:
        if params.override_count < 0:
            raise ValueError("override_count must be non-negative")
        count = params.override_count
    members: list[tuple[int, ...]] = []
    factors: list[list[Quad]] = []
    used: set[int] = set()
    overlap = unfactorable = 0
    for _ in range(count):
        a = tuple(sorted(int(v) for v in rng.choice(n, m, replace=False)))
        if used.intersection(a):
            overlap += 1
            continue
        tiles = factor_within(h, a, budget=params.budget)
        if tiles is None:
            unfactorable += 1
            continue
        members.append(a)
        factors.append(tiles)
        used.update(a)
    fam = AbsorberFamily(m, members, factors, params, seed, p, expected, count, overlap, unfactorable)
    for _ in range(params.probe_count):
        t = tuple(sorted(int(v) for v in rng.choice(n, 4, replace=False)))
        fam.coverage.append((t, len(fam.absorbers_of(h, t))))
    return fam


def _blocks(w: Iterable[int]) -> list[Quad]:
    ws = sorted(w)
    return [tuple(ws[k:k + 4]) for k in range(0, len(ws), 4)]


def absorb_with_assignment(
    h: Hypergraph3, fam: AbsorberFamily, w: Iterable[int]
) -> tuple[list[Quad], dict[Quad, int]]:
    """Factor of H[U + w] and the member index used for each 4-block of ``w``."""
    w = set(w)
    union = set(fam.union)
    if w & union:
        raise Overlap(f"leftover meets the absorbing set at {sorted(w & union)}")
    if len(w) % 4:
        raise BadSize(f"leftover size {len(w)} is not a multiple of 4")
    free = list(range(len(fam.members)))
    assignment: dict[Quad, int] = {}
    tiles: list[Quad] = []
    for t in _blocks(w):
        for k in free:
            found = factor_within(h, set(fam.members[k]) | set(t), budget=fam.params.budget)
            if found is not None:
                assignment[t] = k
                tiles.extend(found)
                free.remove(k)
                break
        else:
            raise NoAbsorberLeft(
                f"no unused member absorbs {t}",
                four_set=t,
                diagnostics={"assigned": {str(list(b)): k for b, k in assignment.items()}, "unused": free},
            )
    for k in free:
        tiles.extend(fam.factors[k])
    return sorted(tiles), assignment


def absorb(h: Hypergraph3, fam: AbsorberFamily, w: Iterable[int]) -> list[Quad]:
    """Cut ``w`` into sorted 4-blocks and give each the first unused member that absorbs it."""
    return absorb_with_assignment(h, fam, w)[0]


@dataclass(frozen=True)
class PipelineConfig:
    gamma: float = 0.1
    i: int = 1
    eta: float = 0.1
    seed: int | None = None
    override_count: int | None = None
    probe_count: int = 8
    budget: int = DEFAULT_BUDGET

    @classmethod
    def demo(cls, seed: int | None = None, override_count: int = 8) -> "PipelineConfig":
        return cls(seed=seed, override_count=override_count)


@dataclass
class StageOutcome:
    stage: str
    ok: bool
    detail: str
    seconds: float


@dataclass
class PipelineReport:
    n: int
    seed: int
    config: PipelineConfig
    stages: list[StageOutcome] = field(default_factory=list)
    family: AbsorberFamily | None = None
    tiler_copies: int | None = None
    tiler_target: int | None = None
    guarantee_target: int | None = None
    leftover: list[int] = field(default_factory=list)
    assignment: dict[Quad, int] = field(default_factory=dict)
    factor: list[Quad] | None = None
    failed_stage: str | None = None

    @property
    def success(self) -> bool:
        return self.factor is not None

    def to_json_obj(self, timings: bool = True) -> dict:
        stages = []
        for s in self.stages:
            rec = {"stage": s.stage, "ok": s.ok, "detail": s.detail}
            if timings:
                rec["seconds"] = s.seconds
            stages.append(rec)
        return {
            "n": self.n,
            "seed": self.seed,
            "config": asdict(self.config),
            "success": self.success,
            "failed_stage": self.failed_stage,
            "stages": stages,
            "family": None if self.family is None else self.family.to_json_obj(),
            "u_size": 0 if self.family is None else len(self.family.union),
            "tiler": {
                "copies": self.tiler_copies,
                "target": self.tiler_target,
                "guarantee_target": self.guarantee_target,
            },
            "leftover": self.leftover,
            "assignment": [{"four_set": list(t), "member": k} for t, k in self.assignment.items()],
            "factor": None if self.factor is None else [list(t) for t in self.factor],
        }


class _Stages:
    def __init__(self, report: PipelineReport):
        self.report = report

    def run(self, name: str, fn):
        t0 = time.perf_counter()
        try:
            out, detail = fn()
        except (HypertileError, BudgetExhausted) as exc:
            self.report.stages.append(StageOutcome(name, False, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0))
            self.report.failed_stage = name
            log.info("pipeline stage %s failed: %s", name, exc)
            return None, False
        self.report.stages.append(StageOutcome(name, True, detail, time.perf_counter() - t0))
        return out, True


def factor_via_absorption(h: Hypergraph3, config: PipelineConfig = PipelineConfig()) -> PipelineReport:
    """Absorbing family, local-search tiling of the rest, absorption of the leftover.

    Failures are reported per stage instead of raised. The tiler is asked for
    a full tiling of H - U; the report also records the weaker target
    floor((n - |U|)/4) - 4 that the codegree condition guarantees.
    """
    seed = default_seed() if config.seed is None else config.seed
    report = PipelineReport(h.n, seed, config)
    stages = _Stages(report)

    def precheck():
        if h.n % 4:
            raise BadSize(f"n = {h.n} is not a multiple of 4")
        delta = min_codegree(h)
        if delta < (0.5 + config.gamma) * h.n:
            warnings.warn(
                f"delta_2 = {delta} < (1/2 + gamma) n; no factor is promised", HypothesisWarning, stacklevel=3
            )
            return None, f"delta_2 = {delta} below (1/2 + gamma) n"
        return None, f"delta_2 = {delta}"

    _, ok = stages.run("precheck", precheck)
    if not ok:
        return report

    params = AbsorberParams(config.i, config.eta, seed, config.override_count, config.probe_count, config.budget)

    def family():
        fam = sample_absorber_family(h, params)
        return fam, f"{len(fam.members)} members kept of {fam.drawn} drawn"

    fam, ok = stages.run("family", family)
    if not ok:
        return report
    report.family = fam
    union = set(fam.union)
    rest = [v for v in range(h.n) if v not in union]

    def tile():
        sub, labels = h.induced(rest)
        target = len(rest) // 4
        report.tiler_target = target
        report.guarantee_target = max(0, target - 4)
        t, trace = greedy_tile(sub, target, seed=seed)
        copies = [tuple(labels[v] for v in s) for s in t.t1]
        return copies, f"{len(copies)} copies in {len(trace)} moves"

    copies, ok = stages.run("tiling", tile)
    if not ok:
        return report
    report.tiler_copies = len(copies)
    covered = {v for s in copies for v in s}
    report.leftover = sorted(set(rest) - covered)

    def absorption():
        tiles, assignment = absorb_with_assignment(h, fam, report.leftover)
        report.assignment = assignment
        return tiles, f"{len(assignment)} blocks absorbed"

    tiles, ok = stages.run("absorb", absorption)
    if not ok:
        return report

    def verify():
        factor = sorted([*copies, *tiles])
        if not verify_tiling(h, K4_MINUS, factor) or len(factor) * 4 != h.n:
            raise HypertileError("assembled factor failed verification")
        return factor, f"{len(factor)} tiles verified"

    factor, ok = stages.run("verify", verify)
    if ok:
        report.factor = factor
    return report
