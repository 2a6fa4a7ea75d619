from __future__ import annotations

from typing import Iterable, Sequence

import pytest

from pathcover.components import ComponentAnalyzer
from pathcover.errors import RescueInvariantError
from pathcover.graph_core import Edge, Graph, norm_edge
from pathcover.phase1 import HComponent, HLayout
from pathcover.rescue import (
    RescueMove,
    apply_move,
    candidate_moves,
    run_rescue_loop,
    start_rescue,
    verify_critical_neighbors,
)


def _edge(cid: int, u: int, v: int) -> HComponent:
    e = norm_edge(u, v)
    return HComponent(cid, "edge", (u, v), (e,), (e,))


def _path5(cid: int, verts: Sequence[int]) -> HComponent:
    edges = tuple(sorted(norm_edge(a, b) for a, b in zip(verts, verts[1:])))
    m_edges = (norm_edge(verts[0], verts[1]), norm_edge(verts[3], verts[4]))
    return HComponent(cid, "path5", tuple(verts), edges, m_edges)


def _layout(n: int, comps: list[HComponent], extra: Iterable[Edge] = ()) -> HLayout:
    comp_of = [-1] * n
    for comp in comps:
        for v in comp.vertices:
            comp_of[v] = comp.cid
    edges = {e for comp in comps for e in comp.edges} | {norm_edge(*e) for e in extra}
    m_edges = frozenset(e for comp in comps for e in comp.m_edges)
    return HLayout(Graph(n, sorted(edges)), comps, comp_of, m_edges)


# critical component: edge center (0, 1), satellites (2, 3) and (4, 5) on 0, (6, 7) on 1
CRITICAL_COVER = [(0, 2), (0, 4), (1, 6)]
CRITICAL_COMPS = [_edge(0, 0, 1), _edge(1, 2, 3), _edge(2, 4, 5), _edge(3, 6, 7)]


def _op1_layout() -> HLayout:
    # an isolated 5-path 8..12 next to the critical satellite vertex 3
    comps = [*CRITICAL_COMPS, _path5(4, [8, 9, 10, 11, 12])]
    return _layout(13, comps, [*CRITICAL_COVER, (3, 8)])


def test_op1_moves_a_critical_satellite_onto_a_zero_anchor() -> None:
    state = start_rescue(ComponentAnalyzer(_op1_layout()), frozenset(CRITICAL_COVER))
    first = next(candidate_moves(state))
    assert (first.kind, first.v, first.v_prime) == ("op1", 3, 8)
    assert first.removed == ((0, 2),)

    records = run_rescue_loop(state)

    assert len(records) == 1
    assert records[0].before.value == 0
    assert records[0].after.value == -2
    assert state.potential_trace() == [0, -2]
    assert state.analysis.critical_components() == []
    assert state.cover_edges == frozenset({(0, 4), (1, 6), (3, 8)})
    assert state.analysis.weight == 4
    assert verify_critical_neighbors(state.analysis) == []


def test_op2_hands_a_satellite_to_a_lone_satellite_edge_center() -> None:
    # edge center (8, 9) with its only satellite (10, 11); 3 sees 11
    comps = [*CRITICAL_COMPS, _edge(4, 8, 9), _edge(5, 10, 11)]
    cover = [*CRITICAL_COVER, (8, 10)]
    state = start_rescue(ComponentAnalyzer(_layout(12, comps, [*cover, (3, 11)])), frozenset(cover))
    assert len(state.analysis.critical_components()) == 1

    first = next(candidate_moves(state))
    assert (first.kind, first.v, first.v_prime) == ("op2", 3, 11)
    assert first.removed == ((0, 2),)

    records = run_rescue_loop(state)

    assert len(records) == 1
    assert state.potential_trace() == [-4, -6]
    assert (records[0].before.ncc, records[0].after.ncc) == (1, 0)
    assert records[0].after.nc == records[0].before.nc == 2
    assert state.cover_edges == frozenset({(0, 4), (1, 6), (8, 10), (3, 11)})
    assert verify_critical_neighbors(state.analysis) == []


def test_op3_splits_two_satellites_into_a_new_component() -> None:
    # edge center (8, 9) holding (10, 11) at 8 and (12, 13) at 9; 3 sees 13
    comps = [*CRITICAL_COMPS, _edge(4, 8, 9), _edge(5, 10, 11), _edge(6, 12, 13)]
    cover = [*CRITICAL_COVER, (8, 10), (9, 12)]
    state = start_rescue(ComponentAnalyzer(_layout(14, comps, [*cover, (3, 13)])), frozenset(cover))
    weight = state.analysis.weight

    first = next(candidate_moves(state))
    assert (first.kind, first.v, first.v_prime) == ("op3", 3, 13)
    assert first.removed == ((0, 2), (9, 12))

    records = run_rescue_loop(state)

    assert len(records) == 1
    before, after = records[0].before, records[0].after
    assert after.value < before.value
    assert (before.nc, after.nc) == (2, 3)
    assert after.ncc == 0
    assert state.analysis.weight == weight
    assert state.cover_edges == frozenset({(0, 4), (1, 6), (8, 10), (3, 13)})
    new_component = state.analysis.component_of_vertex(13)
    assert new_component is not None
    assert sorted(new_component.vertices) == [2, 3, 12, 13]


def test_loop_stops_when_the_neighbor_is_a_responsible_anchor() -> None:
    comps = [*CRITICAL_COMPS, _edge(4, 8, 9), _edge(5, 10, 11), _edge(6, 12, 13)]
    cover = [*CRITICAL_COVER, (8, 10), (9, 12)]
    state = start_rescue(
        ComponentAnalyzer(_layout(14, comps, [*cover, (3, 8)])), frozenset(cover)
    )

    assert list(candidate_moves(state)) == []
    assert run_rescue_loop(state) == []
    assert len(state.analysis.critical_components()) == 1
    assert verify_critical_neighbors(state.analysis) == []


def test_critical_neighbor_check_flags_a_free_neighbor() -> None:
    state = start_rescue(ComponentAnalyzer(_op1_layout()), frozenset(CRITICAL_COVER))

    problems = verify_critical_neighbors(state.analysis)

    assert problems == ["critical satellite 1: neighbor 8 of 3 is free"]


def test_critical_neighbor_check_skips_vertices_no_move_can_reach() -> None:
    # 8..9 is an uncovered edge of H, 10 lies outside H; both touch satellite vertex 3
    comps = [*CRITICAL_COMPS, _edge(4, 8, 9)]
    layout = _layout(11, comps, [*CRITICAL_COVER, (3, 8), (3, 10)])
    state = start_rescue(ComponentAnalyzer(layout), frozenset(CRITICAL_COVER))
    bad_edge = state.analysis.component_of_vertex(8)

    assert bad_edge is not None and bad_edge.kind == "isolated-bad"
    assert state.analysis.component_of_vertex(10) is None
    assert list(candidate_moves(state)) == []
    assert verify_critical_neighbors(state.analysis) == []


def test_apply_move_rejects_moves_that_do_not_fit_the_cover() -> None:
    state = start_rescue(ComponentAnalyzer(_op1_layout()), frozenset(CRITICAL_COVER))
    stale = RescueMove("op1", 3, 8, 1, None, ((2, 9),))

    with pytest.raises(RescueInvariantError):
        apply_move(state, stale)


def test_rescue_loop_respects_the_move_cap() -> None:
    state = start_rescue(ComponentAnalyzer(_op1_layout()), frozenset(CRITICAL_COVER))

    with pytest.raises(RescueInvariantError):
        run_rescue_loop(state, max_moves=0)
