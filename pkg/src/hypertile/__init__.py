"""Tiling 3-uniform hypergraphs with four-vertex patterns: exact search, local search, absorption."""
from .constructions import complete_3graph, h_ab, h_l, random_3graph, random_tournament, tournament_triangles
from .errors import BudgetExhausted, HypertileError
from .formats import from_json, from_text, to_json, to_text
from .hypergraph import (
    K4, K4_MINUS, K4_MINUS_2E, K4_MINUS_3E, PATTERNS, Hypergraph3, Pattern4, edge_extension_check,
    from_edge_list, link_L, min_codegree, partition_stats, pattern_copies,
)
from .solver import FactorResult, Status, find_factor, max_tiling, verify_tiling
from .tiling import Tiling, greedy_tile

__version__ = "0.1.0"
