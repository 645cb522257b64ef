from math import comb

import numpy as np
import pytest

import oracles
from hypertile.acceptance import h_l_to_h_ab_map
from hypertile.constructions import (
    ConstructionSpec, build, complete_3graph, default_seed, h_ab, h_l, random_3graph, random_tournament,
    tournament_triangles,
)
from hypertile.errors import BadL, BadModulus, IncompleteOrientation, TooSmall
from hypertile.hypergraph import K4_MINUS, min_codegree, pattern_copies


def relabel(h, mapping):
    return {tuple(sorted(mapping[v] for v in e)) for e in h.edges}


def test_complete_graph():
    h = complete_3graph(7)
    assert h.m == comb(7, 3)
    assert min_codegree(h) == 5


@pytest.mark.parametrize("a, b", [(3, 3), (4, 4), (6, 6), (5, 7), (9, 3), (4, 8)])
def test_h_ab_edges_and_codegree(a, b):
    h = h_ab(a, b)
    assert all(sum(v >= a for v in e) % 2 == 1 for e in h.edges)
    assert h.m == comb(a, 2) * b + comb(b, 3)
    assert min_codegree(h) == oracles.min_codegree(h) == min(b, a - 1, b - 2)


def test_h_ab_4_4_counts():
    h = h_ab(4, 4)
    assert h.m == 28
    assert min_codegree(h) == 2
    assert len(pattern_copies(h, K4_MINUS)) == 17


def test_h_ab_rejects_tiny():
    with pytest.raises(TooSmall):
        h_ab(1, 1)


@pytest.mark.parametrize("l", range(1, 9))
def test_h_l_16_codegree(l):
    assert min_codegree(h_l(16, l)) == 6


def test_h_l_1_is_h_ab_8_8():
    assert relabel(h_l(16, 1), h_l_to_h_ab_map(16)) == set(h_ab(8, 8).edges)


def test_h_l_top_is_h_ab_with_smaller_a():
    # l = n/2 adds no v-w-z edges, so z acts as one more B vertex
    assert set(h_l(16, 8).edges) == set(h_ab(7, 9).edges)
    assert set(h_l(16, 7).edges) != set(h_ab(7, 9).edges)


def test_h_l_z_edges():
    n, l = 16, 3
    h = h_l(n, l)
    z = n - 1
    base = set(h_ab(n // 2 - 1, n // 2).edges)
    extra = set(h.edges) - base
    assert all(z in e for e in extra)
    v_pairs = sum(1 for i in range(1, 8) for j in range(i + 1, 8) if i < min(j, l))
    w_pairs = sum(1 for i in range(1, 9) for j in range(i + 1, 9) if i < min(j, l))
    vw = sum(1 for i in range(1, 8) for j in range(1, 9) if l <= min(i, j))
    assert len(extra) == v_pairs + w_pairs + vw


@pytest.mark.parametrize("n, l, err", [(14, 1, BadModulus), (20, 1, BadModulus), (4, 1, TooSmall), (16, 0, BadL), (16, 9, BadL)])
def test_h_l_rejects(n, l, err):
    with pytest.raises(err):
        h_l(n, l)


def test_tournament_is_k4_minus_free():
    for n in (5, 8, 12):
        for s in range(20):
            h = tournament_triangles(n, random_tournament(n, s))
            assert pattern_copies(h, K4_MINUS) == []
            if n <= 8:
                assert oracles.copies(h, 3) == []


def test_tournament_orientation_forms_agree():
    beats = random_tournament(7, 4)
    as_map = {(u, v): (u if beats[u, v] else v) for u in range(7) for v in range(u + 1, 7)}
    as_fn = lambda u, v: u if beats[u, v] else v  # noqa: E731
    h = tournament_triangles(7, beats)
    assert tournament_triangles(7, as_map) == h == tournament_triangles(7, as_fn)
    for a, b, c in h.edges:
        assert (beats[a, b] and beats[b, c] and beats[c, a]) or (beats[b, a] and beats[c, b] and beats[a, c])


def test_tournament_transitive_has_no_edges():
    assert tournament_triangles(6, lambda u, v: min(u, v)).m == 0


def test_tournament_rejects_incomplete():
    with pytest.raises(IncompleteOrientation):
        tournament_triangles(4, {(0, 1): 0})
    bad = np.zeros((4, 4), dtype=bool)
    with pytest.raises(IncompleteOrientation):
        tournament_triangles(4, bad)


def test_random_graph_is_seeded():
    assert random_3graph(12, 0.5, 7) == random_3graph(12, 0.5, 7)
    assert random_3graph(12, 0.5, 7) != random_3graph(12, 0.5, 8)
    assert random_3graph(10, 0.0, 1).m == 0
    assert random_3graph(10, 1.0, 1).m == comb(10, 3)
    with pytest.raises(ValueError):
        random_3graph(10, 1.5, 1)


def test_env_seed(monkeypatch):
    monkeypatch.setenv("HYPERTILE_SEED", "11")
    assert default_seed() == 11
    assert random_3graph(10, 0.5) == random_3graph(10, 0.5, 11)
    monkeypatch.delenv("HYPERTILE_SEED")
    assert default_seed() == 0


def test_spec_parsing():
    assert build("hab:a=4,b=4") == h_ab(4, 4)
    assert build("hl:n=16,l=3") == h_l(16, 3)
    assert build("complete:n=6") == complete_3graph(6)
    assert build("rand:n=10,p=0.5,seed=2") == random_3graph(10, 0.5, 2)
    spec = ConstructionSpec.parse("tour:n=8,seed=1")
    assert spec.kind == "tour" and spec.parameters == {"n": 8, "seed": 1}
    for bad in ("foo:n=3", "hab:a=4", "hab:a=4,b=4,c=1", "hab:a4,b=4"):
        with pytest.raises(ValueError):
            ConstructionSpec.parse(bad)
