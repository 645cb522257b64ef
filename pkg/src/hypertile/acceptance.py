"""Acceptance suite: eleven numbered checks plus two controls.

Each check returns a :class:`CriterionResult`; ``run_all`` drives them for
``hypertile selftest`` and for ``tests/test_acceptance.py``.
"""
from __future__ import annotations

import time
import warnings
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .absorption import PipelineConfig, factor_via_absorption
from .closeness import closed_partition, close_neighborhood, connector_matrix
from .constructions import complete_3graph, h_ab, h_l, random_3graph, random_tournament, tournament_triangles
from .errors import CounterexampleWarning
from .hypergraph import K4_MINUS, Hypergraph3, Pattern4, edge_extension_check, from_edge_list, min_codegree, pattern_copies
from .solver import Status, brute_force_threshold, find_factor, verify_tiling
from .tiling import greedy_tile, max_bipartite_matching, validate_tiling


@dataclass
class CriterionResult:
    key: str
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} [{self.key:>2}] {self.name} ({self.seconds:.2f}s): {self.detail}"

    def to_json_obj(self) -> dict:
        return {"key": self.key, "name": self.name, "passed": self.passed, "detail": self.detail, "seconds": self.seconds}


def naive_has_factor(h: Hypergraph3, p: Pattern4 = K4_MINUS) -> bool:
    """Plain recursion without memo or branching heuristics: cover the lowest free vertex."""

    def spans(quad) -> bool:
        return p.spans(sum(h.has_edge(*t) for t in combinations(quad, 3)))

    def rec(free: tuple[int, ...]) -> bool:
        if not free:
            return True
        v, rest = free[0], free[1:]
        for trio in combinations(rest, 3):
            if spans((v, *trio)) and rec(tuple(u for u in rest if u not in trio)):
                return True
        return False

    return h.n % 4 == 0 and rec(tuple(range(h.n)))


def naive_connectors(h: Hypergraph3, x: int, y: int) -> int:
    """Length-1 connector count by enumerating 3-sets and counting spanned edges."""

    def k4m(quad) -> bool:
        return sum(h.has_edge(*t) for t in combinations(quad, 3)) >= 3

    others = [v for v in range(h.n) if v not in (x, y)]
    return sum(1 for s in combinations(others, 3) if k4m((*s, x)) and k4m((*s, y)))


def h_l_to_h_ab_map(n: int) -> list[int]:
    """Relabelling taking h_l(n, 1) onto h_ab(n/2, n/2): B shifts up by one, z joins A last."""
    half = n // 2
    return [*range(half - 1), *range(half, n), half - 1]


def check_hab_invariants(h: Hypergraph3, a: int, b: int) -> list[str]:
    """Structural violations of h against the h_ab(a, b) description."""
    problems = []
    if h.n != a + b:
        problems.append(f"n = {h.n}, expected {a + b}")
        return problems
    for e in h.edges:
        if sum(v >= a for v in e) % 2 == 0:
            problems.append(f"edge {e} has an even number of B-vertices")
    if h.m != comb(a, 2) * b + comb(b, 3):
        problems.append(f"m = {h.m}, expected {comb(a, 2) * b + comb(b, 3)}")
    want = min(b, a - 1, b - 2)
    got = min_codegree(h)
    if got != want:
        problems.append(f"delta_2 = {got}, expected {want}")
    return problems


def _timed(key: str, name: str, fn: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(key, name, passed, detail, time.perf_counter() - t0)


def criterion_threshold() -> tuple[bool, str]:
    t0 = time.perf_counter()
    value = brute_force_threshold(4, K4_MINUS)
    dt = time.perf_counter() - t0
    return value == 1 and dt < 1.0, f"threshold = {value} over 16 hypergraphs in {dt:.3f}s (need 1, < 1s)"


def criterion_hab() -> tuple[bool, str]:
    t0 = time.perf_counter()
    bad = []
    checked = solved = 0
    for a in range(3, 13):
        for b in range(3, 13):
            if (a + b) % 4:
                continue
            h = h_ab(a, b)
            checked += 1
            if min_codegree(h) != min(b, a - 1, b - 2):
                bad.append(f"delta_2({a},{b})")
            if a % 3:
                solved += 1
                if find_factor(h).status is not Status.NO_FACTOR:
                    bad.append(f"factor({a},{b})")
    h = h_ab(5, 7)
    if min_codegree(h) != 4 or find_factor(h).status is not Status.NO_FACTOR:
        bad.append("h_ab(5,7)")
    dt = time.perf_counter() - t0
    return not bad and dt < 120, f"{checked} graphs, {solved} factor searches, {dt:.1f}s; violations: {bad or 'none'}"


def criterion_hl() -> tuple[bool, str]:
    t0 = time.perf_counter()
    bad = []
    for l in range(1, 9):
        h = h_l(16, l)
        if min_codegree(h) != 6:
            bad.append(f"delta_2(l={l})={min_codegree(h)}")
        if find_factor(h).status is not Status.NO_FACTOR:
            bad.append(f"factor(l={l})")
    relabel = h_l_to_h_ab_map(16)
    mapped = {tuple(sorted(relabel[v] for v in e)) for e in h_l(16, 1).edges}
    if mapped != set(h_ab(8, 8).edges):
        bad.append("h_l(16,1) not mapped onto h_ab(8,8)")
    dt = time.perf_counter() - t0
    return not bad and dt < 300, f"l = 1..8 at n = 16, {dt:.1f}s; violations: {bad or 'none'}"


def _prop2_fixtures() -> Iterable[tuple[str, Hypergraph3]]:
    for a in range(3, 13):
        for b in range(3, 13):
            if (a + b) % 4 == 0:
                yield f"hab({a},{b})", h_ab(a, b)
    for l in range(1, 9):
        yield f"hl(16,{l})", h_l(16, l)
    for n in range(3, 21):
        yield f"complete({n})", complete_3graph(n)
    probs = (0.3, 0.6, 0.9)
    for s in range(50):
        n, p = 10 + s % 21, probs[s % 3]
        yield f"rand({n},{p},{s})", random_3graph(n, p, s)
    for n in (8, 12, 16):
        yield f"tour({n},0)", tournament_triangles(n, random_tournament(n, 0))


def criterion_edge_extension() -> tuple[bool, str]:
    bad = []
    count = 0
    for name, h in _prop2_fixtures():
        count += 1
        holds, edge, slack = edge_extension_check(h)
        if not holds:
            bad.append(f"{name}: edge {edge} slack {slack}")
    return not bad, f"{count} fixtures; violations: {bad or 'none'}"


def criterion_tournaments() -> tuple[bool, str]:
    copies = 0
    ratios = []
    means = []
    for n in (8, 12, 16, 20, 24):
        for s in range(200):
            h = tournament_triangles(n, random_tournament(n, s))
            copies += len(pattern_copies(h, K4_MINUS))
            if n == 24:
                ratios.append(min_codegree(h) / n)
                means.append(h.codegrees.sum() / (n * (n - 1)) / n)
    lo, hi = min(ratios), max(ratios)
    in_band = sum(0.15 <= r <= 0.35 for r in ratios)
    ok = copies == 0 and in_band == len(ratios)
    detail = (
        f"K4^- copies over 1000 tournaments: {copies}; n=24 min-codegree/n in [{lo:.3f}, {hi:.3f}], "
        f"{in_band}/200 inside [0.15, 0.35]; mean pair codegree/n = {np.mean(means):.3f}"
    )
    return ok, detail


def _local_search_fixtures():
    for n in (21, 25, 33):
        yield f"complete({n})", complete_3graph(n), None
    for s in range(1, 51):
        yield f"rand(33,0.9,{s})", random_3graph(33, 0.9, s), s


def criterion_local_search() -> tuple[bool, str]:
    bad = []
    runs = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CounterexampleWarning)
        for name, h, seed in _local_search_fixtures():
            delta = min_codegree(h)
            l = (h.n - 13) // 4
            while l > 0 and not delta > (h.n + 2 * l - 2) / 3:
                l -= 1
            runs += 1
            t, trace = greedy_tile(h, l, seed=seed)
            try:
                validate_tiling(h, t)
            except Exception as exc:
                bad.append(f"{name}: {exc}")
            if len(t.t1) < l or not verify_tiling(h, K4_MINUS, t.t1):
                bad.append(f"{name}: {len(t.t1)} < {l}")
            if any(m.delta_w < 1 for m in trace) or len(trace) > 5 * h.n / 4 + 1:
                bad.append(f"{name}: trace not strictly increasing or too long")
            if sum(m.delta_w for m in trace) != t.weight:
                bad.append(f"{name}: weight mismatch")
    stuck = [w for w in caught if issubclass(w.category, CounterexampleWarning)]
    return not bad and not stuck, f"{runs} runs, counterexamples: {len(stuck)}; violations: {bad or 'none'}"


def criterion_matching() -> tuple[bool, str]:
    cells = [(i, j) for i in range(4) for j in range(4)]
    bad = 0
    for g in range(1 << 16):
        adj = [cells[k] for k in range(16) if g >> k & 1]
        size = len(max_bipartite_matching(adj))
        if (len(adj) >= 9 and size < 3) or (len(adj) >= 5 and size < 2):
            bad += 1
    return bad == 0, f"65536 bipartite graphs, violations: {bad}"


def criterion_connectors() -> tuple[bool, str]:
    bad = []
    for a in range(4, 9):
        for b in range(4, 9):
            h = h_ab(a, b)
            c = connector_matrix(h)
            in_a = np.arange(a + b) < a
            off = ~np.eye(a + b, dtype=bool)
            want_a, want_b = comb(a - 2, 2) * b, comb(a, 3) + comb(b - 2, 3)
            if not (c[np.ix_(in_a, in_a)][off[np.ix_(in_a, in_a)]] == want_a).all():
                bad.append(f"AA({a},{b})")
            if not (c[np.ix_(~in_a, ~in_a)][off[np.ix_(~in_a, ~in_a)]] == want_b).all():
                bad.append(f"BB({a},{b})")
            if c[np.ix_(in_a, ~in_a)].any():
                bad.append(f"AB({a},{b})")
            for x, y, want in ((0, 1, want_a), (a, a + 1, want_b), (0, a, 0)):
                if naive_connectors(h, x, y) != want:
                    bad.append(f"enumerator({a},{b},{x},{y})")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                report = closed_partition(h, gamma=0.05, seed=0)
            parts = sorted(map(sorted, report.partition))
            if report.residual or parts != sorted([list(range(a)), list(range(a, a + b))]):
                bad.append(f"partition({a},{b})")
    return not bad, f"25 graphs; violations: {bad or 'none'}"


def criterion_close_neighbourhoods(gamma: float = 0.1) -> tuple[bool, str]:
    fixtures = [(f"complete({n})", complete_3graph(n)) for n in (24, 28, 32)]
    for n in range(24, 33, 2):
        for s in range(1, 5):
            fixtures.append((f"rand({n},0.9,{s})", random_3graph(n, 0.9, s)))
    eta = gamma**2 / 12
    used = 0
    bad = []
    for name, h in fixtures:
        if min_codegree(h) < (0.5 + gamma) * h.n:
            continue
        used += 1
        need = (0.25 + gamma) * h.n
        worst = min(len(close_neighborhood(h, v, 1, eta)) for v in range(h.n))
        if worst < need:
            bad.append(f"{name}: {worst} < {need}")
    return used > 0 and not bad, f"{used}/{len(fixtures)} fixtures meet the codegree condition; violations: {bad or 'none'}"


def criterion_absorption() -> tuple[bool, str]:
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        complete = factor_via_absorption(complete_3graph(48), PipelineConfig.demo(seed=0))
        wins = []
        for s in range(1, 11):
            h = random_3graph(48, 0.9, s)
            r = factor_via_absorption(h, PipelineConfig.demo(seed=s))
            if r.success:
                if not verify_tiling(h, K4_MINUS, r.factor):
                    return False, f"seed {s}: emitted factor fails verification"
                wins.append(s)
    dt = time.perf_counter() - t0
    ok_complete = complete.success and verify_tiling(complete_3graph(48), K4_MINUS, complete.factor)
    ok = ok_complete and len(wins) >= 8 and dt < 600
    return ok, f"complete(48): {'factor' if ok_complete else 'failed'}; random seeds with factor: {len(wins)}/10; {dt:.1f}s"


def criterion_oracle() -> tuple[bool, str]:
    disagree = []
    yes = 0
    k = 0
    for n in (12, 16):
        for p in (0.4, 0.7):
            for s in range(25):
                h = random_3graph(n, p, 1000 + k)
                k += 1
                fast = find_factor(h).status is Status.FACTOR_FOUND
                slow = naive_has_factor(h)
                yes += fast
                if fast != slow:
                    disagree.append((n, p, 1000 + k - 1))
    return not disagree, f"100 graphs, {yes} with a factor; disagreements: {disagree or 'none'}"


def control_corrupted_construction() -> tuple[bool, str]:
    clean = h_ab(6, 6)
    corrupted = from_edge_list(12, [*clean.edges, (0, 1, 2)])
    before = check_hab_invariants(clean, 6, 6)
    after = check_hab_invariants(corrupted, 6, 6)
    return not before and bool(after), f"clean: {len(before)} violations; with an AAA edge: {after}"


def control_budget_exit() -> tuple[bool, str]:
    from .cli import run

    code = run(["factor", "--construct", "complete:n=40", "--budget", "1", "--out", "/dev/null"])
    return code == 4, f"factor with budget 1 on complete(40) exited {code} (expected 4)"


CRITERIA: list[tuple[str, str, Callable[[], tuple[bool, str]]]] = [
    ("1", "threshold at n=4", criterion_threshold),
    ("2", "h_ab codegree and parity obstruction", criterion_hab),
    ("3", "h_l family", criterion_hl),
    ("4", "edge extension bound", criterion_edge_extension),
    ("5", "tournament triangle hypergraphs", criterion_tournaments),
    ("6", "local-search guarantee", criterion_local_search),
    ("7", "4x4 matching lemma", criterion_matching),
    ("8", "h_ab connector structure", criterion_connectors),
    ("9", "level-1 close neighbourhood size", criterion_close_neighbourhoods),
    ("10", "absorption pipeline", criterion_absorption),
    ("11", "solver against naive enumeration", criterion_oracle),
    ("C1", "control: corrupted h_ab is caught", control_corrupted_construction),
    ("C2", "control: budget exhaustion exit code", control_budget_exit),
]


def run_all(keys: Iterable[str] | None = None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    wanted = None if keys is None else {str(k) for k in keys}
    results = []
    for key, name, fn in CRITERIA:
        if wanted is not None and key not in wanted:
            continue
        res = _timed(key, name, fn)
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results


def run_one(key: str) -> CriterionResult:
    for k, name, fn in CRITERIA:
        if k == key:
            return _timed(k, name, fn)
    raise KeyError(key)


__all__ = [
    "CRITERIA", "CriterionResult", "check_hab_invariants", "h_l_to_h_ab_map", "naive_connectors",
    "naive_has_factor", "run_all", "run_one",
]
