"""Grafo simple no dirigido, subgrafos inducidos, formas de componentes y formato en disco."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Mapping, Sequence

from pathcover.errors import GraphFormatError, InvalidPathError, VertexRangeError

Edge = tuple[int, int]
Path = tuple[int, ...]
ShapeKind = Literal["isolated-vertex", "edge", "path", "cycle", "star", "triangle", "other"]

MIN_PATH_ORDER = 4
MAX_PIECE_ORDER = 7
OVERLAY_TAGS = ("m", "d")


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def edge_endpoints(edges: Iterable[Edge]) -> set[int]:
    """V(F) for an edge set F."""
    out: set[int] = set()
    for u, v in edges:
        out.add(u)
        out.add(v)
    return out


class Graph:
    """Grafo simple con ids densos 0..n-1 y etiquetas externas (1-based por defecto).

    Immutable after construction. Neighbor lists are sorted so every scan
    downstream is deterministic.
    """

    __slots__ = ("n", "m", "labels", "_adj", "_edges", "_edge_list")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        labels: Sequence[int] | None = None,
    ) -> None:
        if n < 0:
            raise VertexRangeError(f"vertex count must be >= 0, got {n}")
        edge_set: set[Edge] = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise GraphFormatError(f"self-loop on vertex {u}")
            e = norm_edge(u, v)
            if e in edge_set:
                raise GraphFormatError(f"duplicate edge {e}")
            edge_set.add(e)
            adj[u].append(v)
            adj[v].append(u)
        if labels is not None and len(labels) != n:
            raise VertexRangeError(f"expected {n} labels, got {len(labels)}")
        self.n = n
        self.m = len(edge_set)
        self.labels: tuple[int, ...] = (
            tuple(labels) if labels is not None else tuple(range(1, n + 1))
        )
        self._adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self._edges = frozenset(edge_set)
        self._edge_list: tuple[Edge, ...] = tuple(sorted(edge_set))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self._edges

    def edges(self) -> tuple[Edge, ...]:
        return self._edge_list

    def edge_set(self) -> frozenset[Edge]:
        return self._edges


def _parse_int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", line) from None


def _decode_lines(source: bytes) -> Iterator[str]:
    for lineno, raw in enumerate(source.splitlines(), start=1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphFormatError(f"invalid UTF-8 at byte {exc.start}", lineno) from None


def _iter_lines(source: str | bytes | Iterable[str]) -> Iterable[str]:
    if isinstance(source, bytes):
        return _decode_lines(source)
    if isinstance(source, str):
        return source.splitlines()
    return source


def load_graph(source: str | bytes | Iterable[str]) -> Graph:
    """Parsea el formato `p n m` / `e u v` / `c ...` (vertices 1-based).

    Overlay lines (`m u v`, `d u v`) written by the debug dumps are skipped.
    """
    n = -1
    declared_m = -1
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c" or tokens[0] in OVERLAY_TAGS:
            continue
        tag = tokens[0]
        if tag == "p":
            if n >= 0:
                raise GraphFormatError("duplicate header line", lineno)
            if len(tokens) != 3:
                raise GraphFormatError("header must be 'p <n> <m>'", lineno)
            n = _parse_int(tokens[1], lineno)
            declared_m = _parse_int(tokens[2], lineno)
            if n < 0 or declared_m < 0:
                raise GraphFormatError("negative counts in header", lineno)
        elif tag == "e":
            if n < 0:
                raise GraphFormatError("edge line before header", lineno)
            if len(tokens) != 3:
                raise GraphFormatError("edge line must be 'e <u> <v>'", lineno)
            u = _parse_int(tokens[1], lineno)
            v = _parse_int(tokens[2], lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphFormatError(f"vertex {x} outside 1..{n}", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop on vertex {u}", lineno)
            e = norm_edge(u - 1, v - 1)
            if e in seen:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            seen.add(e)
            edges.append(e)
        else:
            raise GraphFormatError(f"unknown line tag {tag!r}", lineno)
    if n < 0:
        raise GraphFormatError("missing header line 'p <n> <m>'")
    if len(edges) != declared_m:
        raise GraphFormatError(f"header declares {declared_m} edges, found {len(edges)}")
    return Graph(n, edges)


def dump_graph(
    g: Graph,
    overlays: Mapping[str, Iterable[Edge]] | None = None,
    comment: str | None = None,
) -> str:
    lines: list[str] = []
    if comment:
        lines.extend(f"c {part}" for part in comment.splitlines())
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    for tag, overlay in (overlays or {}).items():
        if tag not in OVERLAY_TAGS:
            raise ValueError(f"unknown overlay tag {tag!r}")
        lines.extend(f"{tag} {u + 1} {v + 1}" for u, v in sorted(overlay))
    return "\n".join(lines) + "\n"


def read_overlay(source: str | bytes | Iterable[str], tag: str) -> list[Edge]:
    """Devuelve las aristas (0-based) de las lineas overlay con la etiqueta dada."""
    out: list[Edge] = []
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        tokens = raw.split()
        if len(tokens) == 3 and tokens[0] == tag:
            u, v = _parse_int(tokens[1], lineno), _parse_int(tokens[2], lineno)
            out.append(norm_edge(u - 1, v - 1))
    return out


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """G[keep] con ids renumerados; devuelve tambien el mapa nuevo -> viejo."""
    new_to_old = tuple(sorted(set(keep)))
    for v in new_to_old:
        if not 0 <= v < g.n:
            raise VertexRangeError(f"vertex {v} outside 0..{g.n - 1}")
    old_to_new = {old: new for new, old in enumerate(new_to_old)}
    edges = [
        (old_to_new[u], old_to_new[v])
        for u, v in g.edges()
        if u in old_to_new and v in old_to_new
    ]
    labels = [g.labels[old] for old in new_to_old]
    return Graph(len(new_to_old), edges, labels), new_to_old


def connected_components(g: Graph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    """Componentes conexas (de G o de G restringido a `vertices`), ordenadas por su minimo."""
    allowed = set(g.vertices()) if vertices is None else set(vertices)
    seen: set[int] = set()
    out: list[list[int]] = []
    for start in sorted(allowed):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def edge_set_components(vertices: Iterable[int], edges: Iterable[Edge]) -> list[list[int]]:
    """Componentes del grafo (vertices, edges); union-find sobre un conjunto de aristas."""
    parent: dict[int, int] = {v: v for v in vertices}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    return sorted((sorted(group) for group in groups.values()), key=lambda c: c[0])


@dataclass(frozen=True)
class Shape:
    kind: ShapeKind
    order: int
    center: int | None = None


def shape_of(vertices: Sequence[int], edges: Iterable[Edge]) -> Shape:
    """Forma estructural de un subgrafo conexo dado por sus vertices y aristas."""
    order = len(vertices)
    degree = {v: 0 for v in vertices}
    size = 0
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
        size += 1
    if order == 1:
        return Shape("isolated-vertex", 1)
    if order == 2 and size == 1:
        return Shape("edge", 2)
    if order == 3 and size == 3:
        return Shape("triangle", 3)
    if size == order - 1:
        high = [v for v in vertices if degree[v] >= 2]
        # P3 has a single vertex of degree 2 and is a star with two satellites.
        if len(high) == 1:
            return Shape("star", order, center=high[0])
        if max(degree.values()) <= 2:
            return Shape("path", order)
        return Shape("other", order)
    if size == order and all(d == 2 for d in degree.values()):
        return Shape("cycle", order)
    return Shape("other", order)


def classify_component(g: Graph, comp: Iterable[int]) -> Shape:
    vertices = sorted(set(comp))
    if not vertices:
        raise ValueError("empty component")
    members = set(vertices)
    for v in vertices:
        if not 0 <= v < g.n:
            raise VertexRangeError(f"vertex {v} outside 0..{g.n - 1}")
        if any(w not in members for w in g.neighbors(v)):
            raise ValueError(f"vertex set is not a component: {v} has a neighbor outside it")
    if len(connected_components(g, vertices)) != 1:
        raise ValueError("vertex set is not connected")
    edges = [(u, v) for u in vertices for v in g.neighbors(u) if u < v]
    return shape_of(vertices, edges)


def split_long_path(p: Sequence[int]) -> list[Path]:
    """Parte un camino en trozos contiguos de orden 4..7 con el minimo de trozos."""
    total = len(p)
    if total < MIN_PATH_ORDER:
        raise InvalidPathError(f"path of order {total} is shorter than {MIN_PATH_ORDER}")
    sizes: list[int] = []
    rest = total
    while rest > MAX_PIECE_ORDER:
        if rest - MAX_PIECE_ORDER >= MIN_PATH_ORDER:
            take = MAX_PIECE_ORDER
        else:
            # rest is 8..10: leave exactly four for the last piece
            take = rest - MIN_PATH_ORDER
        sizes.append(take)
        rest -= take
    sizes.append(rest)
    pieces: list[Path] = []
    start = 0
    for size in sizes:
        pieces.append(tuple(p[start : start + size]))
        start += size
    return pieces


@dataclass(frozen=True)
class Solution:
    """Caminos disjuntos de orden >= 4; `value` es el total de vertices cubiertos."""

    paths: tuple[Path, ...] = ()

    @classmethod
    def from_paths(cls, paths: Iterable[Sequence[int]]) -> Solution:
        return cls(tuple(tuple(p) for p in paths))

    @property
    def value(self) -> int:
        return sum(len(p) for p in self.paths)

    def vertices(self) -> set[int]:
        return {v for p in self.paths for v in p}

    def relabel(self, mapping: Sequence[int] | Mapping[int, int]) -> Solution:
        return Solution(tuple(tuple(mapping[v] for v in p) for p in self.paths))

    def split(self) -> Solution:
        return Solution(tuple(piece for p in self.paths for piece in split_long_path(p)))

    def merged(self, other: Solution) -> Solution:
        return Solution(self.paths + other.paths)
