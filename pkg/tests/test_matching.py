from __future__ import annotations

import random

import networkx as nx
import pytest

from pathcover.exact import exact_matching_oracle
from pathcover.generators import gnm
from pathcover.graph_core import Graph
from pathcover.matching import (
    Matching,
    is_maximum_matching,
    max_cardinality_matching,
    max_weight_perfect_matching,
)


def _petersen() -> Graph:
    nxg = nx.petersen_graph()
    return Graph(nxg.number_of_nodes(), [(int(u), int(v)) for u, v in nxg.edges()])


def test_petersen_graph_has_a_perfect_matching() -> None:
    m = max_cardinality_matching(_petersen())

    assert m.size == 5
    assert m.vertices() == set(range(10))


def test_blossom_is_needed_on_odd_cycle_with_tail() -> None:
    # 5-cycle 0..4 with pendant 5 on 0 and pendant 6 on 2
    g = Graph(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (2, 6)])

    assert max_cardinality_matching(g).size == 3


def test_matching_size_equals_brute_force_on_random_graphs() -> None:
    rng = random.Random(2024)
    mismatches: list[tuple[int, int, int]] = []
    for seed in range(500):
        n = rng.randint(1, 10)
        m = rng.randint(0, n * (n - 1) // 2)
        g = gnm(n, m, seed)
        got = max_cardinality_matching(g).size
        want = exact_matching_oracle(g)
        if got != want:
            mismatches.append((seed, got, want))

    assert mismatches == []


def test_is_maximum_matching_flags_a_short_matching() -> None:
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])

    assert not is_maximum_matching(g, Matching.from_edges(4, [(1, 2)]))
    assert is_maximum_matching(g, Matching.from_edges(4, [(0, 1), (2, 3)]))


def test_matching_check_reports_non_edges() -> None:
    g = Graph(4, [(0, 1)])
    m = Matching.from_edges(4, [(0, 1), (2, 3)])

    assert m.check(g) == ["matched pair (2, 3) is not an edge"]
    with pytest.raises(ValueError):
        m.add(1, 2)


def test_max_weight_perfect_matching_prefers_heavy_pairs() -> None:
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])

    m = max_weight_perfect_matching(g, {(0, 1): 1, (2, 3): 1, (1, 2): 5, (0, 3): 5})

    assert m is not None
    assert sorted(m.edges()) == [(0, 3), (1, 2)]
    assert max_weight_perfect_matching(Graph(3, [(0, 1), (1, 2)]), {}) is None
