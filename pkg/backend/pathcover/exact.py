"""Solver exacto para grafos pequenos: caso base del solver y oraculo de los tests."""

from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from pathcover.config import settings
from pathcover.errors import ExactCapExceededError
from pathcover.graph_core import (
    MAX_PIECE_ORDER,
    MIN_PATH_ORDER,
    Graph,
    Path,
    Solution,
    connected_components,
)

logger = logging.getLogger(__name__)

MATCHING_ORACLE_CAP = 10
COVER_ORACLE_CAP = 8


@dataclass(frozen=True)
class ExactConfig:
    vertex_cap: int = 20
    time_budget_s: float = 30.0

    @classmethod
    def from_settings(cls) -> ExactConfig:
        return cls(vertex_cap=settings.exact_cap, time_budget_s=settings.exact_time_budget)


@dataclass(frozen=True)
class ExactResult:
    solution: Solution
    exact: bool = True

    @property
    def value(self) -> int:
        return self.solution.value


class _BudgetExceeded(Exception):
    pass


def _bits(mask: int) -> list[int]:
    out: list[int] = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _PackingSearch:
    """Empaquetado optimo de caminos sobre una componente conexa.

    Local ids follow a BFS order. A state is the bitmask of decided vertices;
    the lowest undecided vertex is either skipped or covered by a connected
    vertex set of order 4..7 with a Hamiltonian path whose minimum it is.
    """

    def __init__(self, g: Graph, comp: Sequence[int], deadline: float) -> None:
        order: list[int] = []
        members = set(comp)
        seen = {comp[0]}
        queue = deque([comp[0]])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in g.neighbors(v):
                if w in members and w not in seen:
                    seen.add(w)
                    queue.append(w)
        index = {v: i for i, v in enumerate(order)}
        self.order = order
        self.adj = [
            sum(1 << index[w] for w in g.neighbors(v) if w in index) for v in order
        ]
        self.full = (1 << len(order)) - 1
        self.deadline = deadline
        self.memo: dict[int, tuple[int, int]] = {}
        self._pathsets: dict[int, list[int]] = {}

    # -- path sets -------------------------------------------------------

    def _local_neighbors(self, verts: list[int]) -> list[int]:
        pos = {v: b for b, v in enumerate(verts)}
        return [
            sum(1 << pos[u] for u in _bits(self.adj[v]) if u in pos) for v in verts
        ]

    def _has_hamiltonian_path(self, mask: int) -> bool:
        verts = _bits(mask)
        k = len(verts)
        # Dirac: minimum degree >= k/2 already gives a Hamiltonian cycle
        if all(2 * (self.adj[v] & mask).bit_count() >= k for v in verts):
            return True
        nb = self._local_neighbors(verts)
        dp = [0] * (1 << k)
        for j in range(k):
            dp[1 << j] = 1 << j
        for sub in range(1, 1 << k):
            ends = dp[sub]
            while ends:
                low = ends & -ends
                ends ^= low
                nxt = nb[low.bit_length() - 1] & ~sub
                while nxt:
                    b = nxt & -nxt
                    nxt ^= b
                    dp[sub | b] |= b
        return dp[(1 << k) - 1] != 0

    def hamiltonian_order(self, mask: int) -> Path:
        verts = _bits(mask)
        k = len(verts)
        nb = self._local_neighbors(verts)
        parent: dict[tuple[int, int], int] = {}
        reach: set[tuple[int, int]] = set()
        for j in range(k):
            reach.add((1 << j, j))
        for sub in range(1, 1 << k):
            for j in range(k):
                if (sub, j) not in reach:
                    continue
                for t in _bits(nb[j] & ~sub):
                    key = (sub | (1 << t), t)
                    if key not in reach:
                        reach.add(key)
                        parent[key] = j
        full = (1 << k) - 1
        end = next(j for j in range(k) if (full, j) in reach)
        seq = [end]
        sub = full
        while (sub, end) in parent:
            prev = parent[(sub, end)]
            sub ^= 1 << end
            end = prev
            seq.append(end)
        return tuple(self.order[verts[j]] for j in reversed(seq))

    def pathsets_from(self, i: int) -> list[int]:
        cached = self._pathsets.get(i)
        if cached is not None:
            return cached
        higher = self.full & ~((1 << (i + 1)) - 1)
        found: list[int] = []

        def extend(sub: int, ext: int, closed: int, size: int) -> None:
            if size >= MIN_PATH_ORDER and self._has_hamiltonian_path(sub):
                found.append(sub)
            if size == MAX_PIECE_ORDER:
                return
            while ext:
                w = ext & -ext
                ext ^= w
                wi = w.bit_length() - 1
                extend(
                    sub | w,
                    ext | (self.adj[wi] & higher & ~closed),
                    closed | self.adj[wi],
                    size + 1,
                )

        start = 1 << i
        extend(start, self.adj[i] & higher, start | self.adj[i], 1)
        found.sort(key=lambda m: (-m.bit_count(), m))
        self._pathsets[i] = found
        return found

    # -- search ----------------------------------------------------------

    def _bound(self, free: int) -> int:
        total = 0
        rest = free
        while rest:
            comp = rest & -rest
            frontier = comp
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                nbrs = self.adj[b.bit_length() - 1] & rest & ~comp
                comp |= nbrs
                frontier |= nbrs
            rest &= ~comp
            size = comp.bit_count()
            if size >= MIN_PATH_ORDER:
                total += size
        return total

    def best(self, decided: int) -> int:
        hit = self.memo.get(decided)
        if hit is not None:
            return hit[0]
        if time.perf_counter() > self.deadline:
            raise _BudgetExceeded
        free = self.full & ~decided
        bound = self._bound(free)
        if bound == 0:
            self.memo[decided] = (0, 0)
            return 0
        low = free & -free
        best_val, best_choice = -1, 0
        for mask in self.pathsets_from(low.bit_length() - 1):
            if mask & decided:
                continue
            val = mask.bit_count() + self.best(decided | mask)
            if val > best_val:
                best_val, best_choice = val, mask
                if best_val == bound:
                    break
        if best_val < bound:
            val = self.best(decided | low)
            if val > best_val:
                best_val, best_choice = val, low
        self.memo[decided] = (best_val, best_choice)
        return best_val

    def reconstruct(self) -> list[Path]:
        paths: list[Path] = []
        decided = 0
        while decided != self.full:
            entry = self.memo.get(decided)
            if entry is None or entry[1] == 0:
                break
            choice = entry[1]
            if choice.bit_count() >= MIN_PATH_ORDER:
                paths.append(self.hamiltonian_order(choice))
            decided |= choice
        return paths

    def greedy(self) -> list[Path]:
        paths: list[Path] = []
        decided = 0
        while decided != self.full:
            free = self.full & ~decided
            low = free & -free
            for mask in self.pathsets_from(low.bit_length() - 1):
                if not mask & decided:
                    paths.append(self.hamiltonian_order(mask))
                    decided |= mask
                    break
            else:
                decided |= low
        return paths


def exact_opt(g: Graph, cfg: ExactConfig | None = None) -> ExactResult:
    """opt(G) exacto: empaquetado de caminos de orden 4..7 por componente conexa."""
    cfg = cfg or ExactConfig.from_settings()
    if g.n > cfg.vertex_cap:
        raise ExactCapExceededError(f"exact solver capped at {cfg.vertex_cap} vertices, got {g.n}")
    deadline = time.perf_counter() + cfg.time_budget_s
    paths: list[Path] = []
    exact = True
    for comp in connected_components(g):
        if len(comp) < MIN_PATH_ORDER:
            continue
        search = _PackingSearch(g, comp, deadline)
        try:
            search.best(0)
            paths.extend(search.reconstruct())
        except _BudgetExceeded:
            logger.warning("Exact search over %d vertices ran out of budget", len(comp))
            exact = False
            paths.extend(search.greedy())
    return ExactResult(Solution.from_paths(paths).split(), exact=exact)


def exact_matching_oracle(g: Graph) -> int:
    """Tamano del emparejamiento maximo por fuerza bruta (n <= 10)."""
    if g.n > MATCHING_ORACLE_CAP:
        raise ExactCapExceededError(f"matching oracle capped at {MATCHING_ORACLE_CAP} vertices")
    nbr_masks = [sum(1 << w for w in g.neighbors(v)) for v in g.vertices()]

    @lru_cache(maxsize=None)
    def rec(avail: int) -> int:
        if not avail:
            return 0
        low = avail & -avail
        v = low.bit_length() - 1
        rest = avail ^ low
        best = rec(rest)
        for w in _bits(nbr_masks[v] & rest):
            best = max(best, 1 + rec(rest & ~(1 << w)))
        return best

    return rec((1 << g.n) - 1)


def exact_cover_oracle(g1: Graph, bad: Sequence[Sequence[int]]) -> int:
    """Peso maximo de saturacion sobre subconjuntos de aristas con grado <= 2 (n <= 8)."""
    if g1.n > COVER_ORACLE_CAP:
        raise ExactCapExceededError(f"cover oracle capped at {COVER_ORACLE_CAP} vertices")
    comp_of = {v: i for i, comp in enumerate(bad) for v in comp}
    edges = list(g1.edges())
    touched_by = [
        sorted({comp_of[x] for x in e if x in comp_of}) for e in edges
    ]
    last_edge = [-1] * len(bad)
    for idx, comps in enumerate(touched_by):
        for c in comps:
            last_edge[c] = idx
    reachable = sum(1 for idx in last_edge if idx >= 0)
    degree = [0] * g1.n
    counters = [0] * len(bad)
    best = 0

    def rec(idx: int, weight: int) -> None:
        nonlocal best
        best = max(best, weight)
        if idx == len(edges) or best == reachable:
            return
        future = sum(1 for c, last in enumerate(last_edge) if counters[c] == 0 and last >= idx)
        if weight + future <= best:
            return
        u, v = edges[idx]
        if degree[u] < 2 and degree[v] < 2:
            degree[u] += 1
            degree[v] += 1
            gained = 0
            for c in touched_by[idx]:
                counters[c] += 1
                gained += counters[c] == 1
            rec(idx + 1, weight + gained)
            for c in touched_by[idx]:
                counters[c] -= 1
            degree[u] -= 1
            degree[v] -= 1
        rec(idx + 1, weight)

    rec(0, 0)
    return best
