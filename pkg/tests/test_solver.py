from itertools import combinations

import pytest
from hypothesis import given

import oracles
from hypertile.acceptance import naive_has_factor
from hypertile.constructions import complete_3graph, h_ab, h_l, random_3graph
from hypertile.errors import BudgetExhausted, TooLarge
from hypertile.hypergraph import K4, K4_MINUS, K4_MINUS_2E, K4_MINUS_3E, PATTERNS, from_edge_list
from hypertile.solver import (
    Status, brute_force_threshold, exact_cover, factor_within, find_factor, max_tiling, verify_tiling,
)
from strategies import hypergraphs


def hab_has_factor(a, b):
    # a multiple of 3, enough B-vertices to finish the AAAB blocks, n divisible by 4
    return a % 3 == 0 and 3 * b >= a and (a + b) % 4 == 0


@pytest.mark.parametrize("a", range(0, 13))
def test_h_ab_factor_characterization(a):
    for b in range(0, 13):
        if a + b < 3 or (a + b) % 4:
            continue
        res = find_factor(h_ab(a, b))
        assert (res.status is Status.FACTOR_FOUND) == hab_has_factor(a, b), (a, b)
        if res.status is Status.FACTOR_FOUND:
            assert verify_tiling(h_ab(a, b), K4_MINUS, res.tiles)


def test_h_ab_6_6_factor():
    res = find_factor(h_ab(6, 6))
    assert res.status is Status.FACTOR_FOUND
    assert len(res.tiles) == 3
    assert res.to_json_obj()["status"] == "FACTOR_FOUND"


def test_n_not_divisible_by_four():
    assert find_factor(complete_3graph(10)).status is Status.NO_FACTOR


@pytest.mark.parametrize("l", [1, 4, 8])
def test_h_l_has_no_factor(l):
    assert find_factor(h_l(16, l)).status is Status.NO_FACTOR


@given(hypergraphs(min_n=8, max_n=8))
def test_factor_matches_oracles(h):
    for p in PATTERNS.values():
        res = find_factor(h, p)
        want = oracles.has_factor(h, p.edge_count)
        assert (res.status is Status.FACTOR_FOUND) == want
        if want:
            assert verify_tiling(h, p, res.tiles)
    assert (find_factor(h).status is Status.FACTOR_FOUND) == naive_has_factor(h)


@pytest.mark.parametrize("seed", range(30))
def test_factor_matches_naive_on_sparse_graphs(seed):
    n = 12 if seed % 2 else 16
    h = random_3graph(n, 0.15 + 0.01 * (seed % 10), seed)
    assert (find_factor(h).status is Status.FACTOR_FOUND) == naive_has_factor(h)


@given(hypergraphs(min_n=8, max_n=8))
def test_factor_is_monotone_in_pattern(h):
    found = [find_factor(h, p).status is Status.FACTOR_FOUND for p in (K4, K4_MINUS, K4_MINUS_2E, K4_MINUS_3E)]
    assert found == sorted(found)


@given(hypergraphs(min_n=8, max_n=8, p=0.6))
def test_factor_survives_adding_edges(h):
    if find_factor(h).status is Status.FACTOR_FOUND:
        missing = [t for t in combinations(range(h.n), 3) if t not in h.edge_set]
        bigger = from_edge_list(h.n, [*h.edges, *missing[:3]])
        assert find_factor(bigger).status is Status.FACTOR_FOUND


@given(hypergraphs(min_n=5, max_n=10))
def test_max_tiling_matches_oracle(h):
    res = max_tiling(h, K4_MINUS)
    best = oracles.max_disjoint(oracles.copies(h, 3))
    assert len(res.tiles) == best
    assert res.optimal
    assert verify_tiling(h, K4_MINUS, res.tiles)
    covered = {v for t in res.tiles for v in t}
    assert sorted(set(range(h.n)) - covered) == res.uncovered


def test_max_tiling_h_ab_4_4():
    res = max_tiling(h_ab(4, 4), K4_MINUS, target=2)
    # every K4^- of h_ab(4,4) uses three A-vertices or the whole of B, so two cannot be disjoint
    assert len(res.tiles) == 1 == oracles.max_disjoint(oracles.copies(h_ab(4, 4), 3))
    assert res.optimal and res.status is Status.TILING_ONLY


def test_max_tiling_partial_target_is_not_claimed_optimal():
    res = max_tiling(complete_3graph(12), K4_MINUS, target=1)
    assert len(res.tiles) == 1 and not res.optimal
    assert max_tiling(complete_3graph(12)).status is Status.FACTOR_FOUND


def test_max_tiling_rejects_bad_target():
    with pytest.raises(ValueError):
        max_tiling(complete_3graph(8), K4_MINUS, target=3)


def test_budget_exhaustion_is_not_no_factor():
    with pytest.raises(BudgetExhausted) as info:
        find_factor(complete_3graph(40), budget=1)
    assert info.value.nodes == 2


def test_exact_cover_small():
    masks, nodes = exact_cover(range(4), [0b0011, 0b1100, 0b0110])
    assert sorted(masks) == [0b0011, 0b1100]
    assert exact_cover(range(4), [0b0111])[0] is None


def test_factor_within():
    h = h_ab(6, 6)
    tiles = factor_within(h, range(8))
    assert tiles is not None and verify_tiling(h, K4_MINUS, tiles)
    assert factor_within(h, [0, 1, 6, 7]) is None
    assert factor_within(h, []) == []
    assert factor_within(h, range(6)) is None


def test_verify_tiling_rejects():
    h = h_ab(6, 6)
    assert not verify_tiling(h, K4_MINUS, [(0, 1, 2, 6), (0, 3, 4, 7)])
    assert not verify_tiling(h, K4_MINUS, [(0, 1, 6, 7)])
    assert not verify_tiling(h, K4_MINUS, [(0, 1, 2)])
    assert not verify_tiling(h, K4_MINUS, [(0, 1, 2, 12)])


@pytest.mark.parametrize("p, want", [(K4_MINUS, 1), (K4, 2), (K4_MINUS_2E, 1), (K4_MINUS_3E, 1)])
def test_brute_force_threshold(p, want):
    assert brute_force_threshold(4, p) == want


def test_brute_force_threshold_limits():
    with pytest.raises(TooLarge):
        brute_force_threshold(5)
    with pytest.raises(ValueError):
        brute_force_threshold(3)
