from __future__ import annotations

import random

import pytest

from pathcover.cover import (
    FactorInstance,
    SaturationInstance,
    build_factor_instance,
    build_saturation_instance,
    compute_mc,
    cover_weight,
    extract_and_prune_cover,
    max_weight_path_cycle_cover,
    pruned_minimality_problems,
    solve_max_weight_fg_factor,
)
from pathcover.errors import FactorInfeasibleError
from pathcover.exact import exact_cover_oracle
from pathcover.generators import gnm
from pathcover.graph_core import Graph, norm_edge
from pathcover.phase1 import build_layout, run_phase1


def _random_saturation_instance(rng: random.Random) -> SaturationInstance:
    n = rng.randint(2, 8)
    verts = list(range(n))
    rng.shuffle(verts)
    groups: list[tuple[int, ...]] = []
    pos = 0
    while pos < n:
        size = rng.randint(1, 3)
        groups.append(tuple(sorted(verts[pos : pos + size])))
        pos += size
    bad = [grp for grp in groups if len(grp) >= 2 and rng.random() < 0.7]
    owner = {v: i for i, grp in enumerate(groups) for v in grp}
    bad_vertices = {v for grp in bad for v in grp}
    candidates = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if owner[u] != owner[v] and (u in bad_vertices or v in bad_vertices)
    ]
    edges = [e for e in candidates if rng.random() < 0.5]
    return SaturationInstance(Graph(n, edges), tuple(bad))


def test_factor_instance_layout() -> None:
    si = SaturationInstance(Graph(4, [(1, 2), (0, 3)]), ((0, 1),))

    fi = build_factor_instance(si)

    assert fi.n == 7
    assert (fi.x(0), fi.y(0), fi.z(0)) == (4, 5, 6)
    assert fi.f[:4] == (2, 2, 0, 0)
    assert fi.g == (2, 2, 2, 2, 2, 2, 1)
    assert set(fi.f2) == {(4, 6), (5, 6)}
    assert fi.weights[(4, 6)] == fi.weights[(5, 6)] == 1
    assert fi.weights[(1, 2)] == 0


def test_factor_solver_on_a_triangle_of_unit_edges() -> None:
    fi = FactorInstance(
        base_n=3,
        h=0,
        g1_edges=frozenset({(0, 1), (1, 2), (0, 2)}),
        f1=(),
        f2=(),
        weights={(0, 1): 1, (1, 2): 1, (0, 2): 1},
        f=(0, 0, 0),
        g=(1, 1, 1),
    )

    chosen = solve_max_weight_fg_factor(fi)

    assert len(chosen) == 1
    assert fi.degree_problems(chosen) == []


def test_factor_solver_reports_infeasible_bounds() -> None:
    fi = FactorInstance(
        base_n=2,
        h=0,
        g1_edges=frozenset(),
        f1=(),
        f2=(),
        weights={},
        f=(1, 0),
        g=(1, 1),
    )

    with pytest.raises(FactorInfeasibleError):
        solve_max_weight_fg_factor(fi)


@pytest.mark.parametrize("use_shortcut", [False, True])
def test_cover_weight_matches_brute_force(use_shortcut: bool) -> None:
    rng = random.Random(404 if use_shortcut else 4)
    mismatches: list[tuple[int, int, int]] = []
    for idx in range(500):
        si = _random_saturation_instance(rng)
        cover = max_weight_path_cycle_cover(si, use_shortcut=use_shortcut)
        want = exact_cover_oracle(si.g1, si.bad_components)
        assert cover.degree_ok()
        assert cover_weight(si, cover.edges) == cover.weight
        if cover.weight != want:
            mismatches.append((idx, cover.weight, want))

    assert mismatches == []


def test_factor_edges_restricted_to_g1_give_the_optimal_weight() -> None:
    rng = random.Random(77)
    for _ in range(100):
        si = _random_saturation_instance(rng)
        factor = solve_max_weight_fg_factor(build_factor_instance(si))
        cover = extract_and_prune_cover(si, factor)

        assert cover.weight == exact_cover_oracle(si.g1, si.bad_components)
        assert pruned_minimality_problems(si, cover.edges) == []


def test_pruning_drops_redundant_edges() -> None:
    si = SaturationInstance(Graph(4, [(0, 2), (1, 3)]), ((0, 1),))

    cover = extract_and_prune_cover(si, [(0, 2), (1, 3)])

    assert cover.weight == 1
    assert cover.edges == frozenset({(1, 3)})


def test_cover_on_phase1_output_saturates_bad_components() -> None:
    g = gnm(40, 60, 3)
    layout = build_layout(run_phase1(g))
    si = build_saturation_instance(layout)

    cover = max_weight_path_cycle_cover(si)
    mc = compute_mc(layout, cover.edges)

    assert cover.degree_ok()
    assert pruned_minimality_problems(si, cover.edges) == []
    for u, v in cover.edges:
        assert g.has_edge(u, v)
        assert layout.comp_of[u] != layout.comp_of[v]
    assert mc <= layout.m_edges
    assert all(norm_edge(*e) in layout.m_edges for e in mc)
    assert cover.saturated <= {c.cid for c in layout.bad_components()}
