from itertools import combinations

import numpy as np
import pytest
from hypothesis import given

import oracles
from hypertile.constructions import complete_3graph, h_ab
from hypertile.errors import DegenerateTriple, DuplicateEdge, OutOfRange, TooLarge, TooSmall, UnlabelledVertex
from hypertile.hypergraph import (
    K4, K4_MINUS, K4_MINUS_2E, K4_MINUS_3E, PATTERNS, bits, edge_extension_check, from_edge_list, link_L,
    link_mask, min_codegree, partition_stats, pattern_by_name, pattern_copies,
)
from strategies import hypergraphs


def test_from_edge_list_sorts_and_canonicalizes():
    h = from_edge_list(5, [(2, 1, 0), (4, 3, 0)])
    assert h.edges == ((0, 1, 2), (0, 3, 4))
    assert h.m == 2
    assert h.has_edge(1, 2, 0) and h.has_edge(4, 0, 3)
    assert not h.has_edge(1, 2, 3)


@pytest.mark.parametrize(
    "n, edges, err",
    [
        (4, [(0, 1, 4)], OutOfRange),
        (4, [(-1, 1, 2)], OutOfRange),
        (4, [(0, 0, 1)], DegenerateTriple),
        (4, [(0, 1)], DegenerateTriple),
        (4, [(0, 1, 2), (2, 1, 0)], DuplicateEdge),
        (0, [], TooSmall),
        (129, [], TooLarge),
    ],
)
def test_from_edge_list_rejects(n, edges, err):
    with pytest.raises(err):
        from_edge_list(n, edges)


def test_input_errors_are_value_errors():
    with pytest.raises(ValueError):
        from_edge_list(3, [(0, 1, 3)])


@given(hypergraphs())
def test_rebuild_from_edges_is_identity(h):
    again = from_edge_list(h.n, list(reversed(h.edges)))
    assert again == h
    assert hash(again) == hash(h)
    assert np.array_equal(again.adj, h.adj)


@given(hypergraphs())
def test_adjacency_cube_is_symmetric(h):
    a = h.adj
    for perm in [(0, 2, 1), (1, 0, 2), (2, 1, 0)]:
        assert np.array_equal(a, a.transpose(perm))
    assert int(a.sum()) == 6 * h.m


@given(hypergraphs())
def test_codegree_matches_oracle(h):
    assert min_codegree(h) == oracles.min_codegree(h)
    u, v = 0, h.n - 1
    assert len(h.pair_nbhd(u, v)) == oracles.codegree(h, u, v)
    assert bits(h.pair_bits[u][v]) == sorted(h.pair_nbhd(u, v))


@given(hypergraphs(max_n=8))
def test_link_forms_agree_with_oracle(h):
    for t in combinations(range(h.n), 3):
        want = oracles.link(h, t)
        assert link_L(h, t) == want
        assert set(bits(link_mask(h, t))) == want


@given(hypergraphs(max_n=8))
def test_pattern_copies_match_oracle_and_nest(h):
    found = {p.name: set(pattern_copies(h, p)) for p in PATTERNS.values()}
    for p in PATTERNS.values():
        assert found[p.name] == set(oracles.copies(h, p.edge_count))
    assert found["k4"] <= found["k4m"] <= found["k4m2e"] <= found["k4m3e"]


@given(hypergraphs(min_n=4, max_n=12))
def test_edge_extension_bound_holds(h):
    holds, worst, slack = edge_extension_check(h)
    assert holds
    if h.edges:
        assert worst in h.edge_set
        bound = (3 * oracles.min_codegree(h) - h.n) / 2
        assert min(len(oracles.link(h, e)) for e in h.edges) - bound == slack


def test_edge_extension_edgeless():
    assert edge_extension_check(from_edge_list(6, [])) == (True, None, None)


def test_edge_extension_examples():
    assert edge_extension_check(complete_3graph(8)) == (True, (0, 1, 2), 0.0)
    assert edge_extension_check(h_ab(6, 6))[0]


def test_pattern_lookup():
    assert pattern_by_name("k4m") is K4_MINUS
    assert [p.edge_count for p in (K4, K4_MINUS, K4_MINUS_2E, K4_MINUS_3E)] == [4, 3, 2, 1]
    with pytest.raises(ValueError):
        pattern_by_name("k5")


def test_partition_stats_h_ab_4_4():
    h = h_ab(4, 4)
    labels = "AAAABBBB"
    stats = partition_stats(h, labels)
    assert stats.edge_counts == {"AAA": 0, "AAB": 24, "ABB": 0, "BBB": 4}
    assert stats.pattern_counts["AAAB"] == 16
    assert stats.pattern_counts["BBBB"] == 1
    assert sum(stats.pattern_counts.values()) == 17
    edges, quads = oracles.type_counts(h, labels, 3)
    assert {k: v for k, v in stats.edge_counts.items() if v} == edges
    assert {k: v for k, v in stats.pattern_counts.items() if v} == quads


@given(hypergraphs(max_n=8))
def test_partition_stats_match_oracle(h):
    labels = {v: "XYZ"[v % 3] for v in range(h.n)}
    stats = partition_stats(h, labels, K4_MINUS_2E)
    edges, quads = oracles.type_counts(h, labels, 2)
    assert {k: v for k, v in stats.edge_counts.items() if v} == edges
    assert {k: v for k, v in stats.pattern_counts.items() if v} == quads
    assert sum(stats.edge_counts.values()) == h.m


def test_partition_stats_requires_every_label():
    h = h_ab(3, 3)
    with pytest.raises(UnlabelledVertex):
        partition_stats(h, {0: "A", 1: "A"})
    with pytest.raises(ValueError):
        partition_stats(h, "ABCDAB")


def test_induced_relabels():
    h = h_ab(4, 4)
    sub, labels = h.induced([0, 1, 4, 5, 6])
    assert labels == [0, 1, 4, 5, 6]
    assert {tuple(labels[v] for v in e) for e in sub.edges} == {e for e in h.edges if set(e) <= set(labels)}
