"""Slow reference implementations built only on ``has_edge`` and itertools."""
from itertools import combinations, permutations


def spanned(h, quad):
    return sum(h.has_edge(*t) for t in combinations(quad, 3))


def codegree(h, u, v):
    return sum(1 for w in range(h.n) if w not in (u, v) and h.has_edge(u, v, w))


def min_codegree(h):
    return min(codegree(h, u, v) for u, v in combinations(range(h.n), 2))


def link(h, t):
    return {v for v in range(h.n) if v not in t and spanned(h, (*t, v)) >= 3}


def copies(h, edge_count):
    return [q for q in combinations(range(h.n), 4) if spanned(h, q) >= edge_count]


def max_disjoint(sets):
    """Largest number of pairwise disjoint members, by exhaustive recursion."""
    sets = [frozenset(s) for s in sets]

    def rec(i, used):
        if i == len(sets):
            return 0
        best = rec(i + 1, used)
        if not sets[i] & used:
            best = max(best, 1 + rec(i + 1, used | sets[i]))
        return best

    return rec(0, frozenset())


def has_factor(h, edge_count):
    if h.n % 4:
        return False
    return max_disjoint(copies(h, edge_count)) * 4 == h.n


def matching_size(edges, lefts, rights):
    """Maximum matching by trying every injection of a subset of lefts."""
    edges = set(edges)
    best = 0
    for k in range(min(len(lefts), len(rights)), 0, -1):
        for ls in combinations(lefts, k):
            for rs in permutations(rights, k):
                if all((l, r) in edges for l, r in zip(ls, rs)):
                    return k
    return best


def connectors(h, x, y):
    others = [v for v in range(h.n) if v not in (x, y)]
    return sum(1 for s in combinations(others, 3) if spanned(h, (*s, x)) >= 3 and spanned(h, (*s, y)) >= 3)


def type_counts(h, labels, edge_count):
    edges, quads = {}, {}
    for e in h.edges:
        key = "".join(sorted(labels[v] for v in e))
        edges[key] = edges.get(key, 0) + 1
    for q in combinations(range(h.n), 4):
        if spanned(h, q) >= edge_count:
            key = "".join(sorted(labels[v] for v in q))
            quads[key] = quads.get(key, 0) + 1
    return edges, quads
