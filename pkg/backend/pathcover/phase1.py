"""Fase 1: construir H y M con tripletes aumentantes (pasos 1.1 y 1.2)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Literal

from pathcover.config import settings
from pathcover.errors import StaleTripleError, StructureError
from pathcover.graph_core import (
    Edge,
    Graph,
    dump_graph,
    edge_set_components,
    norm_edge,
    shape_of,
)
from pathcover.matching import Matching, is_maximum_matching, max_cardinality_matching

logger = logging.getLogger(__name__)

TripleKind = Literal["C1", "C2"]
HKind = Literal["path5", "edge", "triangle", "star"]


@dataclass(frozen=True)
class AugTriple:
    """Triplete (u0, e0, e1); e0 = (v0, w0) y e1 = (v1, w1) ya orientados."""

    kind: TripleKind
    u0: int
    e0: Edge
    e1: Edge

    @property
    def witness_edges(self) -> tuple[Edge, Edge]:
        v0, w0 = self.e0
        v1, _ = self.e1
        if self.kind == "C1":
            return norm_edge(self.u0, v0), norm_edge(self.u0, v1)
        return norm_edge(self.u0, v0), norm_edge(w0, v1)


@dataclass
class Workspace:
    g: Graph
    m_set: Matching
    h_edges: set[Edge] = field(default_factory=set)
    h_vertices: set[int] = field(default_factory=set)
    # M-edges that are still a whole component of H (only meaningful during Step 1.1)
    edge_components: set[Edge] = field(default_factory=set)
    triples_applied: int = 0
    step_1_2_done: bool = False

    def is_outside(self, v: int) -> bool:
        return v not in self.h_vertices

    def outside_vertices(self) -> list[int]:
        return [v for v in self.g.vertices() if v not in self.h_vertices]

    def edge_component_of(self, v: int) -> Edge | None:
        w = self.m_set.partner(v)
        if w is None:
            return None
        e = norm_edge(v, w)
        return e if e in self.edge_components else None


@dataclass(frozen=True)
class HComponent:
    cid: int
    kind: HKind
    # path5: v1..v5 from the lower-id endpoint; star: center first, then leaves
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    m_edges: tuple[Edge, ...]

    @property
    def bad(self) -> bool:
        return self.kind != "path5"

    @property
    def center_vertex(self) -> int | None:
        return self.vertices[0] if self.kind == "star" else None

    @property
    def m_vertices(self) -> set[int]:
        return {x for e in self.m_edges for x in e}

    def internal_non_middle(self) -> tuple[int, ...]:
        return (self.vertices[1], self.vertices[3]) if self.kind == "path5" else ()


@dataclass
class HLayout:
    """Vista congelada de H al final de la fase 1."""

    g: Graph
    components: list[HComponent]
    comp_of: list[int]
    m_edges: frozenset[Edge]

    def component_of(self, v: int) -> HComponent | None:
        cid = self.comp_of[v]
        return None if cid < 0 else self.components[cid]

    def bad_components(self) -> list[HComponent]:
        return [c for c in self.components if c.bad]

    def outside_vertices(self) -> list[int]:
        return [v for v, cid in enumerate(self.comp_of) if cid < 0]

    def h_edges(self) -> set[Edge]:
        return {e for comp in self.components for e in comp.edges}


def _walk_path(vertices: list[int], edges: Iterable[Edge]) -> tuple[int, ...]:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    start = min(v for v in vertices if len(adj[v]) == 1)
    order = [start]
    prev = -1
    while len(order) < len(vertices):
        cur = order[-1]
        nxt = next(w for w in adj[cur] if w != prev)
        prev = cur
        order.append(nxt)
    return tuple(order)


def h_components(ws: Workspace) -> list[HComponent]:
    """Componentes de H con su forma; falla si alguna no es de las esperadas."""
    by_vertex: dict[int, list[Edge]] = {}
    for e in ws.h_edges:
        by_vertex.setdefault(e[0], []).append(e)
        by_vertex.setdefault(e[1], []).append(e)
    m_edges = set(ws.m_set.edges())
    out: list[HComponent] = []
    for cid, verts in enumerate(edge_set_components(ws.h_vertices, ws.h_edges)):
        edges = sorted({e for v in verts for e in by_vertex.get(v, [])})
        shape = shape_of(verts, edges)
        comp_m = tuple(e for e in edges if e in m_edges)
        kind: HKind
        if shape.kind == "path" and shape.order == 5:
            kind = "path5"
            ordered = _walk_path(verts, edges)
        elif shape.kind == "edge":
            kind = "edge"
            ordered = tuple(verts)
        elif shape.kind == "triangle":
            kind = "triangle"
            ordered = tuple(verts)
        elif shape.kind == "star" and shape.center is not None:
            kind = "star"
            ordered = (shape.center, *[v for v in verts if v != shape.center])
        else:
            raise StructureError(f"H component {verts} has unexpected shape {shape.kind}")
        out.append(HComponent(cid, kind, ordered, tuple(edges), comp_m))
    return out


def build_layout(ws: Workspace) -> HLayout:
    comps = h_components(ws)
    comp_of = [-1] * ws.g.n
    for comp in comps:
        for v in comp.vertices:
            comp_of[v] = comp.cid
    return HLayout(ws.g, comps, comp_of, frozenset(ws.m_set.edges()))


def init_workspace(g: Graph) -> Workspace:
    """H = (V(M), M) con M un emparejamiento maximo."""
    m_set = max_cardinality_matching(g)
    edges = set(m_set.edges())
    return Workspace(
        g=g,
        m_set=m_set,
        h_edges=set(edges),
        h_vertices=m_set.vertices(),
        edge_components=set(edges),
    )


def _orient(e: Edge, v: int) -> Edge:
    return (v, e[1] if e[0] == v else e[0])


def find_augmenting_triple(ws: Workspace) -> AugTriple | None:
    """Primer triplete en orden determinista: C1 por vertice exterior, luego C2 por arista."""
    g = ws.g
    for u in g.vertices():
        if not ws.is_outside(u):
            continue
        first: tuple[int, Edge] | None = None
        for v in g.neighbors(u):
            e = ws.edge_component_of(v)
            if e is None:
                continue
            if first is None:
                first = (v, e)
            elif e != first[1]:
                return AugTriple("C1", u, _orient(first[1], first[0]), _orient(e, v))
    for e in sorted(ws.edge_components):
        for v0, w0 in (e, (e[1], e[0])):
            u0 = next((u for u in g.neighbors(v0) if ws.is_outside(u)), None)
            if u0 is None:
                continue
            for v1 in g.neighbors(w0):
                e1 = ws.edge_component_of(v1)
                if e1 is not None and e1 != e:
                    return AugTriple("C2", u0, (v0, w0), _orient(e1, v1))
    return None


def apply_triple(ws: Workspace, t: AugTriple) -> None:
    v0, w0 = t.e0
    v1, w1 = t.e1
    e0, e1 = norm_edge(v0, w0), norm_edge(v1, w1)
    if not ws.is_outside(t.u0):
        raise StaleTripleError(f"vertex {t.u0} is already in H")
    if e0 == e1 or e0 not in ws.edge_components or e1 not in ws.edge_components:
        raise StaleTripleError(f"{e0} and {e1} are no longer two edge components of H")
    for a, b in t.witness_edges:
        if not ws.g.has_edge(a, b):
            raise StaleTripleError(f"({a}, {b}) is not an edge of G")

    ws.h_vertices.add(t.u0)
    ws.h_edges.update(t.witness_edges)
    ws.edge_components.discard(e0)
    ws.edge_components.discard(e1)
    if t.kind == "C2":
        ws.m_set.remove(v0, w0)
        ws.m_set.add(t.u0, v0)
    ws.triples_applied += 1


def run_step_1_1(ws: Workspace) -> int:
    applied = 0
    while (triple := find_augmenting_triple(ws)) is not None:
        apply_triple(ws, triple)
        applied += 1
        logger.debug(
            "Applied %s triple u0=%d e0=%s e1=%s", triple.kind, triple.u0, triple.e0, triple.e1
        )
    logger.debug(
        "Step 1.1 finished: %d triples, %d edge components left", applied, len(ws.edge_components)
    )
    return applied


def run_step_1_2(ws: Workspace) -> int:
    """Anade todas las aristas exterior -> extremo de componente arista."""
    outside = set(ws.outside_vertices())
    added = 0
    for e in sorted(ws.edge_components):
        for x in e:
            for u in ws.g.neighbors(x):
                if u in outside:
                    ws.h_edges.add(norm_edge(u, x))
                    ws.h_vertices.add(u)
                    added += 1
    ws.step_1_2_done = True
    logger.debug("Step 1.2 added %d edges", added)
    return added


def run_phase1(g: Graph) -> Workspace:
    ws = init_workspace(g)
    run_step_1_1(ws)
    run_step_1_2(ws)
    return ws


def _matching_problems(ws: Workspace) -> list[str]:
    problems = [f"matching: {p}" for p in ws.m_set.check(ws.g)]
    if ws.g.n <= settings.matching_audit_max_n and not is_maximum_matching(ws.g, ws.m_set):
        problems.append("M is not a maximum matching of G")
    if not set(ws.m_set.edges()) <= ws.h_edges:
        problems.append("M is not contained in E(H)")
    return problems


def verify_after_triples(ws: Workspace) -> list[str]:
    """Comprueba literalmente las tres afirmaciones al terminar el paso 1.1."""
    problems = _matching_problems(ws)
    try:
        comps = h_components(ws)
    except StructureError as exc:
        return [*problems, str(exc)]
    m_edges = set(ws.m_set.edges())
    allowed_inner: set[int] = set()
    for comp in comps:
        if comp.kind == "path5":
            ends = (norm_edge(*comp.vertices[:2]), norm_edge(*comp.vertices[3:]))
            if not all(e in m_edges for e in ends):
                problems.append(f"5-path {comp.vertices} does not end with M-edges")
            allowed_inner.update(comp.internal_non_middle())
        elif comp.kind == "edge":
            if comp.edges[0] not in m_edges:
                problems.append(f"edge component {comp.edges[0]} is not in M")
        else:
            problems.append(f"component {comp.vertices} is a {comp.kind}, not an edge or a 5-path")
    if find_augmenting_triple(ws) is not None:
        problems.append("an augmenting triple still exists")
    for u in ws.outside_vertices():
        for v in ws.g.neighbors(u):
            e = ws.edge_component_of(v)
            if e is None:
                continue
            allowed = allowed_inner | set(e)
            for w in ws.g.neighbors(u):
                if w not in allowed:
                    problems.append(f"outside vertex {u} next to edge component {e} also sees {w}")
            break
    return problems


def verify_h_structure(ws: Workspace) -> list[str]:
    """Comprueba las cuatro afirmaciones al terminar el paso 1.2."""
    problems = _matching_problems(ws)
    try:
        comps = h_components(ws)
    except StructureError as exc:
        return [*problems, str(exc)]
    m_edges = set(ws.m_set.edges())
    comp_of: dict[int, HComponent] = {}
    for comp in comps:
        for v in comp.vertices:
            comp_of[v] = comp
        if comp.kind == "path5":
            ends = (norm_edge(*comp.vertices[:2]), norm_edge(*comp.vertices[3:]))
            if not all(e in m_edges for e in ends):
                problems.append(f"5-path {comp.vertices} does not end with M-edges")
        elif len(comp.m_edges) != 1:
            problems.append(f"{comp.kind} {comp.vertices} holds {len(comp.m_edges)} M-edges")
    for v1, v2 in ws.g.edges():
        k1, k2 = comp_of.get(v1), comp_of.get(v2)
        if k1 is None or k2 is None or k1.cid == k2.cid:
            continue
        for a, ka, b, kb in ((v1, k1, v2, k2), (v2, k2, v1, k1)):
            restricted = ka.kind == "triangle" or (ka.kind == "star" and a != ka.center_vertex)
            if restricted and (kb.kind != "path5" or b not in kb.internal_non_middle()):
                problems.append(f"{ka.kind} vertex {a} meets {b} outside a 5-path interior")
    for u in ws.g.vertices():
        if u in comp_of:
            continue
        for w in ws.g.neighbors(u):
            kw = comp_of.get(w)
            if kw is None or kw.kind != "path5" or w not in kw.internal_non_middle():
                problems.append(f"outside vertex {u} is adjacent to {w}")
    return problems


def dump_workspace(ws: Workspace, cover_edges: Iterable[Edge] = ()) -> str:
    """H como fichero de grafo, con M (lineas `m`) y C (lineas `d`) superpuestos."""
    h_graph = Graph(ws.g.n, sorted(ws.h_edges), ws.g.labels)
    overlays: dict[str, Iterable[Edge]] = {"m": ws.m_set.edges()}
    cover = list(cover_edges)
    if cover:
        overlays["d"] = cover
    comment = (
        f"H of {ws.g!r}: {len(ws.h_vertices)} vertices, "
        f"|M|={ws.m_set.size}, triples={ws.triples_applied}"
    )
    return dump_graph(h_graph, overlays, comment)
