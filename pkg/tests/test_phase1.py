from __future__ import annotations

import random

import pytest

from pathcover.errors import StaleTripleError
from pathcover.generators import gnm
from pathcover.graph_core import Graph, load_graph, read_overlay
from pathcover.phase1 import (
    apply_triple,
    build_layout,
    dump_workspace,
    find_augmenting_triple,
    init_workspace,
    run_phase1,
    run_step_1_1,
    run_step_1_2,
    verify_after_triples,
    verify_h_structure,
)


def _path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def test_p5_becomes_a_single_five_path() -> None:
    ws = run_phase1(_path(5))
    layout = build_layout(ws)

    assert len(layout.components) == 1
    comp = layout.components[0]
    assert comp.kind == "path5"
    assert comp.vertices == (0, 1, 2, 3, 4)
    assert set(comp.m_edges) == {(0, 1), (3, 4)}
    assert layout.outside_vertices() == []
    assert verify_h_structure(ws) == []


def test_star_collects_the_outside_leaves() -> None:
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])

    ws = init_workspace(g)
    assert run_step_1_1(ws) == 0
    run_step_1_2(ws)
    layout = build_layout(ws)

    assert [c.kind for c in layout.components] == ["star"]
    assert layout.components[0].center_vertex == 0
    assert layout.components[0].bad


def test_apply_triple_refuses_a_stale_triple() -> None:
    ws = init_workspace(_path(5))
    triple = find_augmenting_triple(ws)
    assert triple is not None

    apply_triple(ws, triple)

    with pytest.raises(StaleTripleError):
        apply_triple(ws, triple)


def test_structure_holds_after_each_step_on_random_graphs() -> None:
    rng = random.Random(11)
    failures: list[tuple[int, list[str]]] = []
    for seed in range(150):
        n = rng.randint(4, 40)
        m = rng.randint(0, min(n * (n - 1) // 2, 3 * n))
        ws = init_workspace(gnm(n, m, seed))
        run_step_1_1(ws)
        problems = verify_after_triples(ws)
        run_step_1_2(ws)
        problems += verify_h_structure(ws)
        build_layout(ws)
        if problems:
            failures.append((seed, problems))

    assert failures == []


def test_matching_size_is_preserved_by_triples() -> None:
    g = gnm(30, 45, 5)
    ws = init_workspace(g)
    before = ws.m_set.size

    run_step_1_1(ws)
    run_step_1_2(ws)

    assert ws.m_set.size == before
    assert set(ws.m_set.edges()) <= ws.h_edges


def test_dump_workspace_writes_h_with_the_matching_overlay() -> None:
    ws = run_phase1(_path(5))

    text = dump_workspace(ws, [(1, 2)])

    assert load_graph(text).edge_set() == frozenset(ws.h_edges)
    assert sorted(read_overlay(text, "m")) == sorted(ws.m_set.edges())
    assert read_overlay(text, "d") == [(1, 2)]
