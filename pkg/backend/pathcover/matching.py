"""Emparejamientos: cardinalidad maxima (Edmonds) y peso maximo (networkx)."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, TypeVar

import networkx as nx

from pathcover.graph_core import Edge, Graph, norm_edge

logger = logging.getLogger(__name__)

NodeT = TypeVar("NodeT", bound=Hashable)

UNMATCHED = -1


@dataclass
class Matching:
    """Emparejamiento sobre un grafo host: pareja por vertice (o UNMATCHED)."""

    mate: list[int] = field(default_factory=list)

    @classmethod
    def empty(cls, n: int) -> Matching:
        return cls([UNMATCHED] * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> Matching:
        out = cls.empty(n)
        for u, v in edges:
            out.add(u, v)
        return out

    @property
    def size(self) -> int:
        return sum(1 for v, w in enumerate(self.mate) if w > v)

    def partner(self, v: int) -> int | None:
        w = self.mate[v]
        return None if w == UNMATCHED else w

    def covers(self, v: int) -> bool:
        return self.mate[v] != UNMATCHED

    def edges(self) -> list[Edge]:
        return [(v, w) for v, w in enumerate(self.mate) if w > v]

    def vertices(self) -> set[int]:
        return {v for v, w in enumerate(self.mate) if w != UNMATCHED}

    def add(self, u: int, v: int) -> None:
        if self.mate[u] != UNMATCHED or self.mate[v] != UNMATCHED:
            raise ValueError(f"cannot add ({u}, {v}): endpoint already matched")
        self.mate[u] = v
        self.mate[v] = u

    def remove(self, u: int, v: int) -> None:
        if self.mate[u] != v:
            raise ValueError(f"({u}, {v}) is not in the matching")
        self.mate[u] = UNMATCHED
        self.mate[v] = UNMATCHED

    def copy(self) -> Matching:
        return Matching(list(self.mate))

    def check(self, g: Graph) -> list[str]:
        problems: list[str] = []
        for v, w in enumerate(self.mate):
            if w == UNMATCHED:
                continue
            if self.mate[w] != v:
                problems.append(f"partner index of {v} and {w} disagree")
            elif v < w and not g.has_edge(v, w):
                problems.append(f"matched pair ({v}, {w}) is not an edge")
        return problems


def _greedy_init(g: Graph, mate: list[int]) -> None:
    # low-degree vertices first leaves fewer exposed vertices for the blossom search
    for v in sorted(g.vertices(), key=lambda x: (g.degree(x), x)):
        if mate[v] != UNMATCHED:
            continue
        for w in g.neighbors(v):
            if mate[w] == UNMATCHED:
                mate[v] = w
                mate[w] = v
                break


class _BlossomSearch:
    """Busqueda de camino aumentante desde una raiz con contraccion de blossoms."""

    def __init__(self, g: Graph, mate: list[int]) -> None:
        self.g = g
        self.mate = mate
        n = g.n
        self.parent = [UNMATCHED] * n
        self.base = list(range(n))
        self.used = [False] * n
        self.touched: list[int] = []

    def _reset(self) -> None:
        for v in self.touched:
            self.parent[v] = UNMATCHED
            self.base[v] = v
            self.used[v] = False
        self.touched = []

    def _lca(self, a: int, b: int) -> int:
        seen: set[int] = set()
        while True:
            a = self.base[a]
            seen.add(a)
            if self.mate[a] == UNMATCHED:
                break
            a = self.parent[self.mate[a]]
        while True:
            b = self.base[b]
            if b in seen:
                return b
            b = self.parent[self.mate[b]]

    def _mark_path(self, v: int, b: int, child: int, blossom: set[int]) -> None:
        while self.base[v] != b:
            blossom.add(self.base[v])
            blossom.add(self.base[self.mate[v]])
            self.parent[v] = child
            child = self.mate[v]
            v = self.parent[child]

    def find(self, root: int) -> int:
        """Devuelve el extremo libre de un camino aumentante, o UNMATCHED."""
        self._reset()
        mate, parent, base, used = self.mate, self.parent, self.base, self.used
        used[root] = True
        self.touched.append(root)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in self.g.neighbors(v):
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != UNMATCHED and parent[mate[to]] != UNMATCHED):
                    cur = self._lca(v, to)
                    blossom: set[int] = set()
                    self._mark_path(v, cur, to, blossom)
                    self._mark_path(to, cur, v, blossom)
                    for i in list(self.touched):
                        if base[i] in blossom:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == UNMATCHED:
                    parent[to] = v
                    self.touched.append(to)
                    if mate[to] == UNMATCHED:
                        return to
                    nxt = mate[to]
                    used[nxt] = True
                    self.touched.append(nxt)
                    queue.append(nxt)
        return UNMATCHED

    def augment(self, end: int) -> None:
        v = end
        while v != UNMATCHED:
            pv = self.parent[v]
            ppv = self.mate[pv]
            self.mate[v] = pv
            self.mate[pv] = v
            v = ppv


def max_cardinality_matching(g: Graph) -> Matching:
    """Emparejamiento de cardinalidad maxima (Edmonds, busqueda por raiz libre)."""
    mate = [UNMATCHED] * g.n
    _greedy_init(g, mate)
    search = _BlossomSearch(g, mate)
    # a root with no augmenting path now never gets one later
    for root in g.vertices():
        if mate[root] != UNMATCHED or g.degree(root) == 0:
            continue
        end = search.find(root)
        if end != UNMATCHED:
            search.augment(end)
    result = Matching(mate)
    problems = result.check(g)
    if problems:
        raise AssertionError(f"matching invariant broken: {problems[:3]}")
    logger.debug("Maximum matching on %s: size=%d", g, result.size)
    return result


def max_weight_matching_edges(
    edges: Iterable[tuple[NodeT, NodeT, int]],
    maxcardinality: bool = False,
) -> set[tuple[NodeT, NodeT]]:
    """Motor de peso maximo (pesos enteros), resuelto por componente conexa.

    Integer weights keep networkx on exact integer arithmetic.
    """
    graph: nx.Graph = nx.Graph()
    for u, v, w in edges:
        graph.add_edge(u, v, weight=w)
    chosen: set[tuple[NodeT, NodeT]] = set()
    for nodes in nx.connected_components(graph):
        if len(nodes) < 2:
            continue
        sub = graph.subgraph(nodes)
        chosen.update(nx.max_weight_matching(sub, maxcardinality=maxcardinality, weight="weight"))
    return chosen


def max_weight_perfect_matching(g: Graph, weights: Mapping[Edge, int]) -> Matching | None:
    """Emparejamiento perfecto de peso maximo, o None si G no tiene ninguno."""
    if g.n % 2:
        return None
    isolated = [v for v in g.vertices() if g.degree(v) == 0]
    if isolated:
        return None
    pairs = max_weight_matching_edges(
        ((u, v, int(weights.get((u, v), 0))) for u, v in g.edges()),
        maxcardinality=True,
    )
    if 2 * len(pairs) != g.n:
        return None
    return Matching.from_edges(g.n, (norm_edge(u, v) for u, v in pairs))


def is_maximum_matching(g: Graph, matching: Matching) -> bool:
    """Comprobacion independiente: compara con el emparejamiento de networkx."""
    reference = max_weight_matching_edges(
        ((u, v, 1) for u, v in g.edges()),
        maxcardinality=True,
    )
    return matching.size == len(reference) and not matching.check(g)
