"""Fase 2: G1, cobertura camino-ciclo de peso maximo (via [f,g]-factor), poda y M_C."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from pathcover.config import settings
from pathcover.errors import FactorInfeasibleError, StructureError
from pathcover.graph_core import Edge, Graph, edge_set_components, induced_subgraph, norm_edge
from pathcover.matching import max_weight_matching_edges
from pathcover.phase1 import HLayout

logger = logging.getLogger(__name__)

MAX_COVER_DEGREE = 2


@dataclass(frozen=True)
class SaturationInstance:
    g1: Graph
    bad_components: tuple[tuple[int, ...], ...]
    # layout cid of each bad component, parallel to bad_components (empty for ad-hoc instances)
    bad_cids: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for comp in self.bad_components:
            if seen & set(comp):
                raise ValueError("bad components must be pairwise disjoint")
            seen.update(comp)

    def comp_index(self) -> dict[int, int]:
        return {v: i for i, comp in enumerate(self.bad_components) for v in comp}


@dataclass(frozen=True)
class FactorInstance:
    """G' de la reduccion: V(G) + {x_i, y_i, z_i}, aristas E(G1) + F1 + F2, cotas f y g."""

    base_n: int
    h: int
    g1_edges: frozenset[Edge]
    f1: tuple[Edge, ...]
    f2: tuple[Edge, ...]
    weights: dict[Edge, int]
    f: tuple[int, ...]
    g: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.base_n + 3 * self.h

    def x(self, i: int) -> int:
        return self.base_n + 3 * i

    def y(self, i: int) -> int:
        return self.base_n + 3 * i + 1

    def z(self, i: int) -> int:
        return self.base_n + 3 * i + 2

    def edges(self) -> list[Edge]:
        return sorted(self.weights)

    def factor_weight(self, chosen: Iterable[Edge]) -> int:
        return sum(self.weights[e] for e in chosen)

    def degree_problems(self, chosen: Iterable[Edge]) -> list[str]:
        degree = [0] * self.n
        for u, v in chosen:
            degree[u] += 1
            degree[v] += 1
        return [
            f"vertex {v}: degree {degree[v]} outside [{self.f[v]}, {self.g[v]}]"
            for v in range(self.n)
            if not self.f[v] <= degree[v] <= self.g[v]
        ]


@dataclass
class PathCycleCover:
    edges: frozenset[Edge]
    weight: int
    saturated: frozenset[int] = field(default_factory=frozenset)
    shortcut: bool = False

    def degree_ok(self) -> bool:
        degree: dict[int, int] = {}
        for u, v in self.edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        return all(d <= MAX_COVER_DEGREE for d in degree.values())


def build_saturation_instance(layout: HLayout) -> SaturationInstance:
    """G1: aristas de G entre componentes distintas de H con al menos una mala."""
    comp_of = layout.comp_of
    comps = layout.components
    edges: list[Edge] = []
    for u, v in layout.g.edges():
        cu, cv = comp_of[u], comp_of[v]
        if cu < 0 or cv < 0 or cu == cv:
            continue
        if comps[cu].bad or comps[cv].bad:
            edges.append((u, v))
    bad = layout.bad_components()
    return SaturationInstance(
        g1=Graph(layout.g.n, edges, layout.g.labels),
        bad_components=tuple(tuple(sorted(c.vertices)) for c in bad),
        bad_cids=tuple(c.cid for c in bad),
    )


def build_factor_instance(si: SaturationInstance) -> FactorInstance:
    n = si.g1.n
    h = len(si.bad_components)
    weights: dict[Edge, int] = {e: 0 for e in si.g1.edges()}
    f = [0] * (n + 3 * h)
    g = [MAX_COVER_DEGREE] * n + [0] * (3 * h)
    f1: list[Edge] = []
    f2: list[Edge] = []
    for i, comp in enumerate(si.bad_components):
        x, y, z = n + 3 * i, n + 3 * i + 1, n + 3 * i + 2
        for v in comp:
            f[v] = MAX_COVER_DEGREE
            f1.extend((norm_edge(x, v), norm_edge(y, v)))
        f2.extend((norm_edge(x, z), norm_edge(y, z)))
        g[x] = g[y] = len(comp)
        g[z] = 1
    for e in f1:
        weights[e] = 0
    for e in f2:
        weights[e] = 1
    if n + 3 * h > 4 * max(n, 1) or len(weights) > si.g1.m + 4 * n:
        raise StructureError(f"auxiliary graph too large: {n + 3 * h} vertices")
    return FactorInstance(
        base_n=n,
        h=h,
        g1_edges=si.g1.edge_set(),
        f1=tuple(f1),
        f2=tuple(f2),
        weights=weights,
        f=tuple(f),
        g=tuple(g),
    )


def _kernelize(
    fi: FactorInstance,
) -> tuple[set[Edge], set[Edge], list[int], list[int]]:
    """Fija aristas forzadas (f = grado) y descarta las imposibles (g = 0)."""
    f = list(fi.f)
    g = list(fi.g)
    alive = set(fi.weights)
    incident: list[set[Edge]] = [set() for _ in range(fi.n)]
    for e in alive:
        incident[e[0]].add(e)
        incident[e[1]].add(e)
    fixed: set[Edge] = set()
    queue = deque(range(fi.n))
    queued = [True] * fi.n
    while queue:
        v = queue.popleft()
        queued[v] = False
        if not incident[v]:
            if f[v] > 0:
                raise FactorInfeasibleError(f"vertex {v} needs degree {f[v]} but has no edges left")
            continue
        if g[v] == 0:
            drop = list(incident[v])
            choose = False
        elif f[v] == len(incident[v]):
            drop = list(incident[v])
            choose = True
        elif f[v] > len(incident[v]):
            raise FactorInfeasibleError(
                f"vertex {v} needs degree {f[v]} but has {len(incident[v])} edges"
            )
        else:
            continue
        for e in drop:
            alive.discard(e)
            a, b = e
            incident[a].discard(e)
            incident[b].discard(e)
            if choose:
                fixed.add(e)
                for x in e:
                    f[x] = max(0, f[x] - 1)
                    g[x] -= 1
                    if g[x] < 0:
                        raise FactorInfeasibleError(f"vertex {x} exceeds its upper bound")
            w = b if a == v else a
            if not queued[w]:
                queued[w] = True
                queue.append(w)
    return fixed, alive, f, g


def solve_max_weight_fg_factor(fi: FactorInstance) -> set[Edge]:
    """[f,g]-factor de peso maximo por reduccion a emparejamiento de peso maximo.

    Each free edge e = (u, v) becomes two nodes joined by a 4L edge ("not chosen");
    endpoint u owns min(g, d) ports, the first f of them mandatory with an L bonus.
    L exceeds the total edge weight, so covering every mandatory port dominates and
    the edge weights only break ties.
    """
    fixed, alive, f, g = _kernelize(fi)
    if not alive:
        chosen = set(fixed)
    else:
        degree: dict[int, int] = {}
        for u, v in alive:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        big = sum(fi.weights[e] for e in alive) + 1
        ports = {v: min(g[v], d) for v, d in degree.items()}
        triples: list[tuple[tuple[object, ...], tuple[object, ...], int]] = []
        for e in sorted(alive):
            u, v = e
            a, b = ("a", e), ("b", e)
            triples.append((a, b, 4 * big))
            for k in range(ports[u]):
                triples.append((a, ("p", u, k), 2 * big + big * (k < f[u]) + fi.weights[e]))
            for k in range(ports[v]):
                triples.append((b, ("p", v, k), 2 * big + big * (k < f[v])))
        pairs = max_weight_matching_edges(triples)
        at_port: set[tuple[object, ...]] = set()
        for x, y in pairs:
            if x[0] == "p":
                at_port.add(y)
            elif y[0] == "p":
                at_port.add(x)
        chosen = set(fixed)
        chosen.update(e for e in alive if ("a", e) in at_port and ("b", e) in at_port)
    problems = fi.degree_problems(chosen)
    if problems:
        raise FactorInfeasibleError(f"no [f,g]-factor: {problems[:3]}")
    return chosen


class _Incidence:
    """Contadores de aristas por componente mala para peso y poda incrementales."""

    def __init__(self, si: SaturationInstance, edges: Iterable[Edge]) -> None:
        self.index = si.comp_index()
        self.counts = [0] * len(si.bad_components)
        for e in edges:
            for c in self.touched(e):
                self.counts[c] += 1

    def touched(self, e: Edge) -> set[int]:
        return {self.index[x] for x in e if x in self.index}

    @property
    def weight(self) -> int:
        return sum(1 for c in self.counts if c)

    def saturated(self) -> set[int]:
        return {i for i, c in enumerate(self.counts) if c}


def cover_weight(si: SaturationInstance, edges: Iterable[Edge]) -> int:
    return _Incidence(si, edges).weight


def extract_and_prune_cover(si: SaturationInstance, factor: Iterable[Edge]) -> PathCycleCover:
    """C = F n E(G1); luego se quitan aristas sobrantes en orden de id.

    A single sorted pass suffices: counters only decrease, so an edge that is
    needed once stays needed.
    """
    g1_edges = si.g1.edge_set()
    cover = sorted({e for e in factor if e in g1_edges})
    inc = _Incidence(si, cover)
    kept: list[Edge] = []
    for e in cover:
        touched = inc.touched(e)
        if all(inc.counts[c] >= 2 for c in touched):
            for c in touched:
                inc.counts[c] -= 1
        else:
            kept.append(e)
    saturated = inc.saturated()
    return PathCycleCover(
        edges=frozenset(kept),
        weight=len(saturated),
        saturated=frozenset(si.bad_cids[i] if si.bad_cids else i for i in saturated),
    )


def _greedy_cover(si: SaturationInstance) -> tuple[list[Edge], int, int]:
    """Cobertura voraz; devuelve (aristas, peso, cota superior)."""
    index = si.comp_index()
    options: dict[int, list[Edge]] = {i: [] for i in range(len(si.bad_components))}
    for e in si.g1.edges():
        for c in {index[x] for x in e if x in index}:
            options[c].append(e)
    upper = sum(1 for opts in options.values() if opts)
    degree: dict[int, int] = {}
    saturated: set[int] = set()
    chosen: list[Edge] = []
    for c in sorted(options, key=lambda i: (len(options[i]), i)):
        if c in saturated or not options[c]:
            continue
        best: tuple[int, Edge] | None = None
        for e in options[c]:
            if degree.get(e[0], 0) >= MAX_COVER_DEGREE or degree.get(e[1], 0) >= MAX_COVER_DEGREE:
                continue
            gain = len({index[x] for x in e if x in index} - saturated)
            if best is None or gain > best[0]:
                best = (gain, e)
        if best is None:
            continue
        e = best[1]
        chosen.append(e)
        for x in e:
            degree[x] = degree.get(x, 0) + 1
            if x in index:
                saturated.add(index[x])
    return chosen, len(saturated), upper


def _pieces(si: SaturationInstance) -> list[list[int]]:
    links: list[Edge] = list(si.g1.edges())
    for comp in si.bad_components:
        links.extend((comp[0], v) for v in comp[1:])
    touched = {x for e in si.g1.edges() for x in e}
    return [p for p in edge_set_components(touched, links) if touched.intersection(p)]


def _piece_instance(
    si: SaturationInstance, piece: Sequence[int]
) -> tuple[SaturationInstance, tuple[int, ...]]:
    sub, new_to_old = induced_subgraph(si.g1, piece)
    old_to_new = {old: new for new, old in enumerate(new_to_old)}
    members = set(piece)
    bad = tuple(
        tuple(old_to_new[v] for v in comp) for comp in si.bad_components if comp[0] in members
    )
    return SaturationInstance(sub, bad), new_to_old


def max_weight_path_cycle_cover(
    si: SaturationInstance,
    use_shortcut: bool | None = None,
) -> PathCycleCover:
    """Pasos 2.2 y 2.3 por piezas independientes de G1 contraido."""
    shortcut = settings.cover_shortcut if use_shortcut is None else use_shortcut
    factor: set[Edge] = set()
    shortcut_pieces = 0
    for piece in _pieces(si):
        sub, new_to_old = _piece_instance(si, piece)
        local: Iterable[Edge]
        if shortcut:
            greedy, weight, upper = _greedy_cover(sub)
            if weight == upper:
                shortcut_pieces += 1
                local = greedy
            else:
                local = solve_max_weight_fg_factor(build_factor_instance(sub))
        else:
            local = solve_max_weight_fg_factor(build_factor_instance(sub))
        factor.update(
            norm_edge(new_to_old[u], new_to_old[v])
            for u, v in local
            if u < sub.g1.n and v < sub.g1.n
        )
    cover = extract_and_prune_cover(si, factor)
    cover.shortcut = shortcut_pieces > 0
    logger.debug(
        "Cover weight=%d edges=%d (greedy pieces=%d)",
        cover.weight,
        len(cover.edges),
        shortcut_pieces,
    )
    return cover


def saturated_cids(layout: HLayout, edges: Iterable[Edge]) -> set[int]:
    out: set[int] = set()
    for e in edges:
        for x in e:
            cid = layout.comp_of[x]
            if cid >= 0 and layout.components[cid].bad:
                out.add(cid)
    return out


def compute_mc(layout: HLayout, cover_edges: Iterable[Edge]) -> set[Edge]:
    """M_C: aristas de M en 5-caminos o en componentes malas saturadas."""
    saturated = saturated_cids(layout, cover_edges)
    out: set[Edge] = set()
    for comp in layout.components:
        if not comp.bad or comp.cid in saturated:
            out.update(comp.m_edges)
    return out


def pruned_minimality_problems(si: SaturationInstance, edges: Iterable[Edge]) -> list[str]:
    cover = sorted(edges)
    inc = _Incidence(si, cover)
    return [
        f"edge {e} can be dropped without losing weight"
        for e in cover
        if all(inc.counts[c] >= 2 for c in inc.touched(e))
    ]
