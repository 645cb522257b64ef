"""Text and JSON serialization of hypergraphs.

Text: a header line ``n m`` followed by ``m`` lines ``u v w`` (0-indexed,
any order within a line). JSON: ``{"n": ..., "edges": [[u, v, w], ...]}``.
Both parsers normalize to sorted triples; both emitters write the canonical
(sorted) form, so ``parse(emit(h)) == h``.
"""
from __future__ import annotations

import json

from .errors import FormatError
from .hypergraph import Hypergraph3, from_edge_list


def to_text(h: Hypergraph3) -> str:
    lines = [f"{h.n} {h.m}"]
    lines.extend(f"{u} {v} {w}" for u, v, w in h.edges)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Hypergraph3:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise FormatError("empty input")
    try:
        header = [int(x) for x in rows[0]]
        body = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise FormatError(f"non-integer token: {exc}") from None
    if len(header) != 2:
        raise FormatError("header must be 'n m'")
    n, m = header
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, found {len(body)}")
    for i, r in enumerate(body, start=2):
        if len(r) != 3:
            raise FormatError(f"line {i}: expected 3 vertices, got {len(r)}")
    return from_edge_list(n, body)


def to_json_obj(h: Hypergraph3) -> dict:
    return {"n": h.n, "edges": [list(e) for e in h.edges]}


def to_json(h: Hypergraph3) -> str:
    return json.dumps(to_json_obj(h))


def from_json(text: str) -> Hypergraph3:
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        edges = obj["edges"]
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad hypergraph JSON: {exc}") from None
    return from_edge_list(n, edges)
