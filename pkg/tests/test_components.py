from __future__ import annotations

import random
from typing import Iterable, Sequence

from pathcover.components import (
    ComponentAnalyzer,
    anchor_census,
    is_critical_ratio,
    verify_satellite_attachment,
    verify_satellites_bad,
)
from pathcover.cover import build_saturation_instance, max_weight_path_cycle_cover
from pathcover.exact import exact_opt
from pathcover.generators import gnm
from pathcover.graph_core import Edge, Graph, norm_edge
from pathcover.phase1 import HComponent, HLayout, build_layout, run_phase1
from pathcover.solver import census_and_branch


def _edge(cid: int, u: int, v: int) -> HComponent:
    e = norm_edge(u, v)
    return HComponent(cid, "edge", (u, v), (e,), (e,))


def _star(cid: int, center: int, leaves: Sequence[int], partner: int) -> HComponent:
    edges = tuple(sorted(norm_edge(center, x) for x in leaves))
    return HComponent(cid, "star", (center, *leaves), edges, (norm_edge(center, partner),))


def _layout(n: int, comps: list[HComponent], extra: Iterable[Edge] = ()) -> HLayout:
    comp_of = [-1] * n
    for comp in comps:
        for v in comp.vertices:
            comp_of[v] = comp.cid
    edges = {e for comp in comps for e in comp.edges} | {norm_edge(*e) for e in extra}
    m_edges = frozenset(e for comp in comps for e in comp.m_edges)
    return HLayout(Graph(n, sorted(edges)), comps, comp_of, m_edges)


# edge center (0, 1); 0 holds satellites (2, 3) and (4, 5), 1 holds (6, 7)
TWO_PLUS_ONE_COVER = [(0, 2), (0, 4), (1, 6)]


def _two_plus_one_layout(extra: Iterable[Edge] = ()) -> HLayout:
    comps = [_edge(0, 0, 1), _edge(1, 2, 3), _edge(2, 4, 5), _edge(3, 6, 7)]
    return _layout(8, comps, [*TWO_PLUS_ONE_COVER, *extra])


def _subgraph_opt(edges: Iterable[Edge]) -> int:
    edge_list = sorted(edges)
    verts = sorted({x for e in edge_list for x in e})
    local = {v: i for i, v in enumerate(verts)}
    return exact_opt(Graph(len(verts), [(local[u], local[v]) for u, v in edge_list])).value


def test_critical_ratio_threshold() -> None:
    assert is_critical_ratio(8, 6)
    assert is_critical_ratio(14, 11)
    assert not is_critical_ratio(8, 7)
    assert not is_critical_ratio(4, 5)


def test_edge_center_with_two_and_one_anchor_is_critical() -> None:
    analyzer = ComponentAnalyzer(_two_plus_one_layout())

    info = analyzer.component_for([0, 1, 2, 3], TWO_PLUS_ONE_COVER)

    assert info.kind == "composite"
    assert info.center == 0
    assert info.center_kind == "edge"
    assert info.anchors == {0: 2, 1: 1}
    assert info.s == 8
    assert info.opt_value == 6
    assert info.critical
    assert _subgraph_opt(info.edges) == 6


def test_anchor_census_builds_q_and_p_paths() -> None:
    layout = _two_plus_one_layout()
    info = ComponentAnalyzer(layout).component_for([0, 1, 2, 3], TWO_PLUS_ONE_COVER)

    paths = anchor_census(info, layout)

    assert paths.p == {0: (3, 2, 0, 4, 5)}
    assert paths.q[1] == (1, 6, 7)
    assert len(paths.q[0]) == 3


def test_analysis_census_sends_the_critical_component_to_recursion() -> None:
    analysis = ComponentAnalyzer(_two_plus_one_layout()).analyze(TWO_PLUS_ONE_COVER)

    census, branch = census_and_branch(analysis)

    assert [k.kid for k in analysis.critical_components()] == [0]
    assert analysis.r_set() == {0}
    assert census.classes[1] == 1
    assert (census.critical_1, census.critical_2) == (1, 0)
    assert (census.a, census.b) == (1, 1)
    assert census.r_c == frozenset({0})
    assert census.u_c == frozenset({2, 3, 4, 5})
    assert branch == "recurse"
    assert analysis.potential().value == 0 + 1 - 3
    assert verify_satellites_bad(analysis) == []
    assert verify_satellite_attachment(analysis) == []


def test_one_anchor_that_would_turn_critical_is_responsible() -> None:
    # second component: edge center (8, 9) with one satellite on each end
    comps = [
        _edge(0, 0, 1),
        _edge(1, 2, 3),
        _edge(2, 4, 5),
        _edge(3, 6, 7),
        _edge(4, 8, 9),
        _edge(5, 10, 11),
        _edge(6, 12, 13),
    ]
    cover = [*TWO_PLUS_ONE_COVER, (8, 10), (9, 12)]
    layout = _layout(14, comps, [*cover, (3, 8)])

    analysis = ComponentAnalyzer(layout).analyze(cover)

    source = analysis.component_of_vertex(0)
    target = analysis.component_of_vertex(8)
    assert source is not None and target is not None
    assert source.critical and not source.responsible
    assert not target.critical
    assert target.responsible
    assert target.responsible_anchors == (8,)
    assert analysis.r_set() == {0, 8}


def test_pruning_keeps_one_spare_star_leaf() -> None:
    layout = _layout(5, [_star(0, 0, [1, 2, 3, 4], partner=2)])
    analyzer = ComponentAnalyzer(layout)

    assert analyzer.pruned_edges([0], []) == frozenset({(0, 2)})
    assert analyzer.pruned_edges([0], [], extra_pins=[4]) == frozenset({(0, 2), (0, 4)})


def test_star_center_anchors_only_at_the_center() -> None:
    comps = [_star(0, 0, [1, 2, 3], partner=1), _edge(1, 4, 5), _edge(2, 6, 7)]
    cover = [(0, 4), (0, 6)]
    analyzer = ComponentAnalyzer(_layout(8, comps, cover))

    info = analyzer.component_for([0, 1, 2], cover)

    assert info.center_kind == "star"
    assert info.anchors == {0: 2}
    assert info.s == 6
    assert info.opt_value == 5
    assert _subgraph_opt(info.edges) == 5


def test_component_opt_matches_generic_exact_solver() -> None:
    rng = random.Random(8)
    checked = 0
    for seed in range(120):
        n = rng.randint(10, 40)
        g = gnm(n, rng.randint(n // 2, 2 * n), seed)
        layout = build_layout(run_phase1(g))
        cover = max_weight_path_cycle_cover(build_saturation_instance(layout))
        analyzer = ComponentAnalyzer(layout)
        analysis = analyzer.analyze(cover.edges)
        for info in analysis.family():
            if len(info.vertices) > 14:
                continue
            assert analyzer.exact_component_opt(info).value == _subgraph_opt(info.edges)
            checked += 1
        assert verify_satellites_bad(analysis) == []
        assert verify_satellite_attachment(analysis) == []

    assert checked > 0


def test_removing_a_critical_satellite_leaves_a_noncritical_component() -> None:
    analyzer = ComponentAnalyzer(_two_plus_one_layout())
    analysis = analyzer.analyze(frozenset(TWO_PLUS_ONE_COVER))

    pairs = analysis.critical_satellites()

    assert sorted(sat.cid for _info, sat in pairs) == [1, 2]
    for info, sat in pairs:
        reduced = analyzer.without_satellite(info, sat.cid)
        assert reduced.kind == "composite"
        assert reduced.s == 6
        assert not reduced.critical


def test_critical_satellite_removal_on_random_graphs() -> None:
    rng = random.Random(21)
    for seed in range(150):
        n = rng.randint(10, 36)
        g = gnm(n, rng.randint(n // 2, 2 * n), seed)
        layout = build_layout(run_phase1(g))
        cover = max_weight_path_cycle_cover(build_saturation_instance(layout))
        analyzer = ComponentAnalyzer(layout)
        for info, sat in analyzer.analyze(cover.edges).critical_satellites():
            reduced = analyzer.without_satellite(info, sat.cid)
            assert reduced.kind != "isolated-bad"
            assert not reduced.critical
