"""Analisis de H+C: elemento centro, satelites, anclas, s(K), opt(K), criticos y responsables.

Every component of H+C is rebuilt from the H-components it contains and the
cover edges between them. Structural results (shape, anchors, s, opt, raw
criticality) depend only on that pair and are cached; responsibility depends on
the whole cover and is recomputed on each analysis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Sequence

from pathcover.config import settings
from pathcover.errors import GuaranteeError, StructureError
from pathcover.exact import ExactConfig, exact_opt
from pathcover.graph_core import Edge, Graph, Path, Solution, edge_endpoints, norm_edge
from pathcover.phase1 import HComponent, HKind, HLayout

logger = logging.getLogger(__name__)

ComponentKind = Literal["isolated-path5", "isolated-bad", "composite"]

CRITICAL_NUM = 14
CRITICAL_DEN = 11
COMPONENT_VERTEX_BOUND: dict[str, int] = {"path5": 35, "edge": 10, "star": 6}
COMPONENT_EXACT_CAP = 40


def is_critical_ratio(s: int, opt: int) -> bool:
    """s/opt >= 14/11 en aritmetica entera."""
    return CRITICAL_DEN * s >= CRITICAL_NUM * opt


@dataclass(frozen=True)
class Satellite:
    cid: int
    anchor: int
    attach: int

    @property
    def rescue_edge(self) -> Edge:
        return norm_edge(self.anchor, self.attach)


@dataclass
class ComponentInfo:
    kid: int
    kind: ComponentKind
    center: int
    center_kind: HKind
    satellites: tuple[Satellite, ...]
    node_cids: tuple[int, ...]
    vertices: tuple[int, ...]
    edges: frozenset[Edge]
    cover_edges: frozenset[Edge]
    anchors: dict[int, int]
    s: int
    opt_value: int
    opt_solution: Solution
    critical: bool
    responsible: bool = False
    responsible_anchors: tuple[int, ...] = ()
    improved_solution: Solution | None = None

    @property
    def in_family(self) -> bool:
        """Fuera de la familia solo quedan las componentes malas aisladas."""
        return self.kind != "isolated-bad"

    @property
    def critical_and_responsible(self) -> bool:
        return self.critical and self.responsible

    @property
    def effective_critical(self) -> bool:
        return self.critical and self.improved_solution is None

    @property
    def solution(self) -> Solution:
        return self.improved_solution if self.improved_solution is not None else self.opt_solution

    @property
    def value(self) -> int:
        return self.solution.value

    def anchors_with(self, j: int) -> list[int]:
        return sorted(v for v, deg in self.anchors.items() if deg == j)

    def satellites_of(self, anchor: int) -> list[Satellite]:
        return [sat for sat in self.satellites if sat.anchor == anchor]

    def satellite(self, cid: int) -> Satellite | None:
        return next((sat for sat in self.satellites if sat.cid == cid), None)


@dataclass(frozen=True)
class AnchorPaths:
    q: dict[int, Path]
    p: dict[int, Path]


@dataclass(frozen=True)
class Potential:
    n0: int
    ncc: int
    nc: int

    @property
    def value(self) -> int:
        return self.n0 + self.ncc - 3 * self.nc


@dataclass
class Analysis:
    layout: HLayout
    cover_edges: frozenset[Edge]
    components: list[ComponentInfo]
    comp_kid: list[int]
    saturated: frozenset[int]
    mc_edges: frozenset[Edge] = field(default_factory=frozenset)

    @property
    def weight(self) -> int:
        return len(self.saturated)

    def family(self) -> list[ComponentInfo]:
        return [k for k in self.components if k.in_family]

    def component_of_vertex(self, v: int) -> ComponentInfo | None:
        cid = self.layout.comp_of[v]
        return None if cid < 0 else self.components[self.comp_kid[cid]]

    def anchor_degree(self, v: int) -> int | None:
        info = self.component_of_vertex(v)
        return None if info is None else info.anchors.get(v)

    def is_responsible_anchor(self, v: int) -> bool:
        info = self.component_of_vertex(v)
        return info is not None and v in info.responsible_anchors

    def critical_components(self) -> list[ComponentInfo]:
        return [k for k in self.components if k.effective_critical]

    def critical_satellites(self) -> list[tuple[ComponentInfo, Satellite]]:
        """Satelites cuyo ancla de rescate es un 2-ancla de una componente critica."""
        out: list[tuple[ComponentInfo, Satellite]] = []
        for info in self.critical_components():
            for sat in info.satellites:
                if info.anchors.get(sat.anchor) == 2:
                    out.append((info, sat))
        return out

    def r_set(self) -> set[int]:
        out: set[int] = set()
        for info in self.family():
            out.update(info.anchors_with(2))
            out.update(info.responsible_anchors)
        return out

    def mc_vertices(self) -> set[int]:
        return edge_endpoints(self.mc_edges)

    def potential(self) -> Potential:
        return Potential(
            n0=sum(len(k.anchors_with(0)) for k in self.family()),
            ncc=len(self.critical_components()),
            nc=len(self.components),
        )


def _longest_from(comp: HComponent, start: int) -> Path:
    adj: dict[int, list[int]] = {v: [] for v in comp.vertices}
    for u, v in comp.edges:
        adj[u].append(v)
        adj[v].append(u)
    best: list[int] = [start]
    trail = [start]
    on_trail = {start}

    def walk(v: int) -> None:
        nonlocal best
        if len(trail) > len(best):
            best = list(trail)
        for w in sorted(adj[v]):
            if w not in on_trail:
                trail.append(w)
                on_trail.add(w)
                walk(w)
                trail.pop()
                on_trail.discard(w)

    walk(start)
    return tuple(best)


def anchor_census(info: ComponentInfo, layout: HLayout) -> AnchorPaths:
    """Q_v para cada ancla y P_v para cada 2-ancla."""
    q: dict[int, Path] = {}
    p: dict[int, Path] = {}
    for v, j in sorted(info.anchors.items()):
        if j == 0:
            q[v] = (v,)
            continue
        tails = [
            _longest_from(layout.components[sat.cid], sat.attach)
            for sat in sorted(info.satellites_of(v), key=lambda sat: sat.cid)
        ]
        longest = max(tails, key=len)
        q[v] = (v, *longest)
        if j == 2:
            p[v] = (*reversed(tails[0]), v, *tails[1])
    return AnchorPaths(q, p)


class ComponentAnalyzer:
    """Construye y cachea la informacion de las componentes de H+C para un H fijo."""

    def __init__(self, layout: HLayout, exact_cfg: ExactConfig | None = None) -> None:
        self.layout = layout
        self.g: Graph = layout.g
        self.exact_cfg = exact_cfg or ExactConfig(
            vertex_cap=COMPONENT_EXACT_CAP, time_budget_s=settings.exact_time_budget
        )
        self._templates: dict[tuple[frozenset[int], frozenset[Edge]], ComponentInfo] = {}
        self._opt_cache: dict[frozenset[Edge], tuple[int, Solution]] = {}
        self.exact_calls = 0

    # -- exact opt over an edge set --------------------------------------

    def solve_edges(self, edges: frozenset[Edge]) -> tuple[int, Solution]:
        hit = self._opt_cache.get(edges)
        if hit is not None:
            return hit
        verts = sorted(edge_endpoints(edges))
        local = {v: i for i, v in enumerate(verts)}
        sub = Graph(len(verts), [(local[u], local[v]) for u, v in edges])
        result = exact_opt(sub, self.exact_cfg)
        self.exact_calls += 1
        if not result.exact:
            logger.warning("Component opt over %d vertices is a lower bound only", len(verts))
        entry = (result.value, result.solution.relabel(verts))
        self._opt_cache[edges] = entry
        return entry

    def pruned_edges(
        self,
        cids: Sequence[int],
        cover_edges: Iterable[Edge],
        extra_pins: Iterable[int] = (),
    ) -> frozenset[Edge]:
        """E(K) sin las hojas de estrella sobrantes (opt no cambia)."""
        cover = set(cover_edges)
        pins = edge_endpoints(cover) | set(extra_pins)
        out: set[Edge] = set(cover)
        for cid in cids:
            comp = self.layout.components[cid]
            if comp.kind != "star":
                out.update(comp.edges)
                continue
            center = comp.vertices[0]
            leaves = comp.vertices[1:]
            keep = [x for x in leaves if x in pins]
            spare = [x for x in leaves if x not in pins]
            if spare:
                partner = next((x for x in spare if norm_edge(center, x) in comp.m_edges), None)
                keep.append(partner if partner is not None else spare[0])
            out.update(norm_edge(center, x) for x in keep)
        return frozenset(out)

    # -- single component ------------------------------------------------

    def _pick_center(self, cids: Sequence[int], cover: Iterable[Edge]) -> int:
        comps = self.layout.components
        comp_of = self.layout.comp_of
        degree = {cid: 0 for cid in cids}
        pairs: set[tuple[int, int]] = set()
        count = 0
        for u, v in cover:
            a, b = comp_of[u], comp_of[v]
            pair = (min(a, b), max(a, b))
            if a == b or pair in pairs:
                raise StructureError(f"cover edge ({u}, {v}) repeats a contracted link")
            pairs.add(pair)
            degree[a] += 1
            degree[b] += 1
            count += 1
        if count != len(cids) - 1:
            raise StructureError(f"contracted component over {list(cids)} is not a tree")
        hubs = [cid for cid in cids if degree[cid] >= 2]
        if len(hubs) > 1:
            raise StructureError(f"contracted component over {list(cids)} is not an edge or star")
        if hubs:
            return hubs[0]
        a, b = sorted(cids)
        for prefer in (lambda c: comps[c].kind == "path5", lambda c: comps[c].kind != "triangle"):
            picked = [c for c in (a, b) if prefer(c)]
            if len(picked) == 1:
                return picked[0]
        return a

    def component_for(self, cids: Iterable[int], cover_edges: Iterable[Edge]) -> ComponentInfo:
        """Descompone la componente formada por `cids` unidas por `cover_edges`."""
        node_cids = tuple(sorted(set(cids)))
        cover = frozenset(norm_edge(*e) for e in cover_edges)
        key = (frozenset(node_cids), cover)
        hit = self._templates.get(key)
        if hit is not None:
            return hit
        info = self._build(node_cids, cover)
        self._templates[key] = info
        return info

    def _build(self, node_cids: tuple[int, ...], cover: frozenset[Edge]) -> ComponentInfo:
        comps = self.layout.components
        comp_of = self.layout.comp_of
        vertices = tuple(sorted(v for cid in node_cids for v in comps[cid].vertices))
        h_edges = {e for cid in node_cids for e in comps[cid].edges}
        edges = frozenset(h_edges | cover)
        if len(node_cids) == 1:
            comp = comps[node_cids[0]]
            if comp.bad:
                return ComponentInfo(
                    kid=-1,
                    kind="isolated-bad",
                    center=comp.cid,
                    center_kind=comp.kind,
                    satellites=(),
                    node_cids=node_cids,
                    vertices=vertices,
                    edges=edges,
                    cover_edges=cover,
                    anchors={},
                    s=0,
                    opt_value=0,
                    opt_solution=Solution(),
                    critical=False,
                )
            opt_value, opt_solution = self.solve_edges(frozenset(comp.edges))
            s = len(comp.m_vertices)
            return ComponentInfo(
                kid=-1,
                kind="isolated-path5",
                center=comp.cid,
                center_kind=comp.kind,
                satellites=(),
                node_cids=node_cids,
                vertices=vertices,
                edges=edges,
                cover_edges=cover,
                anchors={v: 0 for v in comp.vertices},
                s=s,
                opt_value=opt_value,
                opt_solution=opt_solution,
                critical=is_critical_ratio(s, opt_value),
            )

        center_cid = self._pick_center(node_cids, cover)
        center = comps[center_cid]
        satellites: list[Satellite] = []
        for u, v in sorted(cover):
            anchor, attach = (u, v) if comp_of[u] == center_cid else (v, u)
            satellites.append(Satellite(comp_of[attach], anchor, attach))
        satellites.sort(key=lambda sat: (sat.anchor, sat.cid))
        if center.kind == "star":
            anchors = {center.vertices[0]: 0}
        else:
            anchors = {v: 0 for v in center.vertices}
        for sat in satellites:
            if sat.anchor in anchors:
                anchors[sat.anchor] += 1
        s = sum(len(comps[cid].m_vertices) for cid in node_cids)
        pruned = self.pruned_edges(node_cids, cover)
        bound = COMPONENT_VERTEX_BOUND.get(center.kind)
        size = len(edge_endpoints(pruned))
        if bound is not None and size > bound:
            raise StructureError(
                f"component with {center.kind} center keeps {size} vertices (bound {bound})"
            )
        opt_value, opt_solution = self.solve_edges(pruned)
        return ComponentInfo(
            kid=-1,
            kind="composite",
            center=center_cid,
            center_kind=center.kind,
            satellites=tuple(satellites),
            node_cids=node_cids,
            vertices=vertices,
            edges=edges,
            cover_edges=cover,
            anchors=anchors,
            s=s,
            opt_value=opt_value,
            opt_solution=opt_solution,
            critical=is_critical_ratio(s, opt_value),
        )

    def exact_component_opt(self, info: ComponentInfo) -> Solution:
        if info.kind == "isolated-bad":
            return Solution()
        return self.solve_edges(self.pruned_edges(info.node_cids, info.cover_edges))[1]

    def without_satellite(self, info: ComponentInfo, cid: int) -> ComponentInfo:
        sat = info.satellite(cid)
        if sat is None:
            raise ValueError(f"H-component {cid} is not a satellite of component {info.kid}")
        return self.component_for(
            [c for c in info.node_cids if c != cid], info.cover_edges - {sat.rescue_edge}
        )

    def moved_to(self, info: ComponentInfo, sat: Satellite, v: int, w: int) -> ComponentInfo:
        """Componente de `v` tras mover el satelite `sat` a `v` con la arista {v, w}."""
        return self.component_for(
            set(info.node_cids) | {sat.cid},
            (info.cover_edges - {sat.rescue_edge}) | {norm_edge(v, w)},
        )

    # -- whole H+C ---------------------------------------------------------

    def analyze(self, cover_edges: Iterable[Edge]) -> Analysis:
        layout = self.layout
        cover = frozenset(norm_edge(*e) for e in cover_edges)
        parent = list(range(len(layout.components)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in cover:
            ru, rv = find(layout.comp_of[u]), find(layout.comp_of[v])
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, list[int]] = {}
        for cid in range(len(layout.components)):
            groups.setdefault(find(cid), []).append(cid)
        cover_by_root: dict[int, set[Edge]] = {}
        for e in cover:
            cover_by_root.setdefault(find(layout.comp_of[e[0]]), set()).add(e)

        components: list[ComponentInfo] = []
        comp_kid = [-1] * len(layout.components)
        for kid, root in enumerate(sorted(groups)):
            info = replace(self.component_for(groups[root], cover_by_root.get(root, ())), kid=kid)
            components.append(info)
            for cid in info.node_cids:
                comp_kid[cid] = kid
        saturated = frozenset(
            cid for info in components if info.kind == "composite" for cid in info.node_cids
            if layout.components[cid].bad
        )
        mc_edges = frozenset(
            e
            for comp in layout.components
            if not comp.bad or comp.cid in saturated
            for e in comp.m_edges
        )
        analysis = Analysis(layout, cover, components, comp_kid, saturated, mc_edges)
        classify_responsible(analysis, self)
        for info in components:
            if info.critical_and_responsible:
                try:
                    info.improved_solution = handle_critical_and_responsible(info, self)
                except GuaranteeError as exc:
                    if settings.strict_audits:
                        raise
                    logger.warning("Component %d stays critical: %s", info.kid, exc)
        return analysis


def classify_critical(info: ComponentInfo) -> bool:
    return is_critical_ratio(info.s, info.opt_value)


def classify_responsible(analysis: Analysis, analyzer: ComponentAnalyzer) -> None:
    """Marca las 1-anclas que volverian critica su componente al recibir un satelite critico.

    Satellites count as critical here by raw criticality of their component,
    before any critical-and-responsible component is downgraded.
    """
    g = analyzer.g
    comp_of = analysis.layout.comp_of
    critical_sats: dict[int, Satellite] = {}
    for info in analysis.components:
        if not info.critical or info.kind != "composite":
            continue
        for sat in info.satellites:
            if info.anchors.get(sat.anchor) == 2:
                critical_sats[sat.cid] = sat
    if not critical_sats:
        return
    for info in analysis.components:
        if info.kind != "composite":
            continue
        responsible: list[int] = []
        for v in info.anchors_with(1):
            for w in g.neighbors(v):
                sat = critical_sats.get(comp_of[w])
                if sat is None or sat.anchor == v:
                    continue
                try:
                    moved = analyzer.moved_to(info, sat, v, w)
                except StructureError:
                    logger.debug("Move of satellite %d to %d gives no valid component", sat.cid, v)
                    continue
                if moved.critical:
                    responsible.append(v)
                    break
        if responsible:
            info.responsible = True
            info.responsible_anchors = tuple(responsible)


def handle_critical_and_responsible(info: ComponentInfo, analyzer: ComponentAnalyzer) -> Solution:
    """Solucion sobre G[V(K)] con las aristas que cruzan desde las 1-anclas responsables."""
    members = set(info.vertices)
    crossing = {
        norm_edge(v, x)
        for v in info.responsible_anchors
        for x in analyzer.g.neighbors(v)
        if x in members and norm_edge(v, x) not in info.edges
    }
    best_value, best = info.opt_value, info.opt_solution
    if crossing:
        pruned = analyzer.pruned_edges(
            info.node_cids, info.cover_edges, extra_pins=edge_endpoints(crossing)
        )
        value, solution = analyzer.solve_edges(pruned | crossing)
        if value > best_value:
            best_value, best = value, solution
    if is_critical_ratio(info.s, best_value):
        raise GuaranteeError(
            f"s={info.s} with best value {best_value} still reaches {CRITICAL_NUM}/{CRITICAL_DEN}"
        )
    return best


def decompose(layout: HLayout, cover_edges: Iterable[Edge]) -> list[ComponentInfo]:
    return ComponentAnalyzer(layout).analyze(cover_edges).components


def verify_satellites_bad(analysis: Analysis) -> list[str]:
    problems: list[str] = []
    comps = analysis.layout.components
    for info in analysis.components:
        if info.kind != "composite":
            continue
        for sat in info.satellites:
            if not comps[sat.cid].bad:
                problems.append(f"component {info.kid}: satellite {sat.cid} is a 5-path")
    return problems


def verify_satellite_attachment(analysis: Analysis) -> list[str]:
    problems: list[str] = []
    comps = analysis.layout.components
    for info in analysis.components:
        if info.kind != "composite":
            continue
        if info.center_kind == "triangle":
            problems.append(f"component {info.kid}: center element is a triangle")
        center = comps[info.center]
        for sat in info.satellites:
            if center.kind == "star" and sat.anchor != center.vertices[0]:
                problems.append(f"component {info.kid}: satellite {sat.cid} hangs from a star leaf")
            if comps[sat.cid].kind == "triangle" and (
                center.kind != "path5" or sat.anchor not in center.internal_non_middle()
            ):
                problems.append(f"component {info.kid}: triangle {sat.cid} at {sat.anchor}")
        degrees = [j for j in info.anchors.values() if j > 2]
        if degrees:
            problems.append(f"component {info.kid}: anchor supports {max(degrees)} satellites")
    return problems
