"""Familias de instancias deterministas para `pathcover gen` y `pathcover bench`."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Iterator, Literal

import networkx as nx

from pathcover.errors import GeneratorParamError
from pathcover.graph_core import MIN_PATH_ORDER, Graph, Path, norm_edge

Family = Literal["gnm", "regular", "planted-paths"]
FAMILIES: tuple[Family, ...] = ("gnm", "regular", "planted-paths")

# per-instance seeds are derived as seed * stride + index
_SEED_STRIDE = 100_003


@dataclass(frozen=True)
class GeneratedInstance:
    family: Family
    seed: int
    graph: Graph
    params: dict[str, int] = field(default_factory=dict)
    planted: tuple[Path, ...] = ()

    @property
    def planted_value(self) -> int:
        return sum(len(p) for p in self.planted)


def _from_nx(nxg: Any, n: int) -> Graph:
    return Graph(n, (norm_edge(int(u), int(v)) for u, v in nxg.edges()))


def _unknown_family(family: str) -> str:
    return f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}"


def gnm(n: int, m: int, seed: int) -> Graph:
    if n < 0 or m < 0:
        raise GeneratorParamError(f"gnm needs n >= 0 and m >= 0, got n={n} m={m}")
    if m > n * (n - 1) // 2:
        raise GeneratorParamError(f"gnm: m={m} exceeds n(n-1)/2 = {n * (n - 1) // 2}")
    return _from_nx(nx.gnm_random_graph(n, m, seed=seed), n)


def regular(n: int, d: int, seed: int) -> Graph:
    if n < 0 or d < 0:
        raise GeneratorParamError(f"regular needs n >= 0 and d >= 0, got n={n} d={d}")
    if n and d >= n:
        raise GeneratorParamError(f"regular: degree {d} must be below n={n}")
    if (n * d) % 2:
        raise GeneratorParamError(f"regular: n*d must be even, got n={n} d={d}")
    return _from_nx(nx.random_regular_graph(d, n, seed=seed), n)


def planted_paths(
    count: int,
    noise: int,
    seed: int,
    min_order: int = MIN_PATH_ORDER,
    max_order: int = 7,
) -> tuple[Graph, tuple[Path, ...]]:
    """Caminos disjuntos de orden min..max mas `noise` aristas al azar; etiquetas barajadas."""
    if count < 0 or noise < 0:
        raise GeneratorParamError(f"planted-paths needs count, noise >= 0, got {count}/{noise}")
    if not MIN_PATH_ORDER <= min_order <= max_order:
        raise GeneratorParamError(f"planted-paths: bad order range {min_order}..{max_order}")
    rng = random.Random(seed)
    orders = [rng.randint(min_order, max_order) for _ in range(count)]
    n = sum(orders)
    perm = list(range(n))
    rng.shuffle(perm)
    planted: list[Path] = []
    edges: set[tuple[int, int]] = set()
    start = 0
    for order in orders:
        p = tuple(perm[start + k] for k in range(order))
        planted.append(p)
        edges.update(norm_edge(a, b) for a, b in zip(p, p[1:]))
        start += order
    free = n * (n - 1) // 2 - len(edges)
    if noise > free:
        raise GeneratorParamError(f"planted-paths: noise={noise} exceeds {free} free vertex pairs")
    while noise:
        u, v = rng.sample(range(n), 2)
        e = norm_edge(u, v)
        if e not in edges:
            edges.add(e)
            noise -= 1
    return Graph(n, sorted(edges)), tuple(planted)


def generate(family: str, params: dict[str, int], seed: int) -> GeneratedInstance:
    try:
        if family == "gnm":
            g = gnm(params["n"], params["m"], seed)
            return GeneratedInstance("gnm", seed, g, dict(params))
        if family == "regular":
            g = regular(params["n"], params["d"], seed)
            return GeneratedInstance("regular", seed, g, dict(params))
        if family == "planted-paths":
            g, planted = planted_paths(
                params["p"],
                params.get("noise", 0),
                seed,
                params.get("min_order", MIN_PATH_ORDER),
                params.get("max_order", 7),
            )
            return GeneratedInstance("planted-paths", seed, g, dict(params), planted)
    except KeyError as exc:
        raise GeneratorParamError(f"{family}: missing parameter {exc.args[0]!r}") from None
    raise GeneratorParamError(_unknown_family(family))


def bench_instances(
    family: str,
    count: int,
    seed: int,
    n_min: int = 5,
    n_max: int = 12,
) -> Iterator[GeneratedInstance]:
    """Instancias del bench: n en [n_min, n_max] y densidades de dispersas a densas."""
    if count < 0:
        raise GeneratorParamError(f"count must be >= 0, got {count}")
    if not 0 <= n_min <= n_max:
        raise GeneratorParamError(f"bad order range {n_min}..{n_max}")
    for idx in range(count):
        inst_seed = seed * _SEED_STRIDE + idx
        rng = random.Random(inst_seed)
        n = rng.randint(n_min, n_max)
        if family == "gnm":
            pairs = n * (n - 1) // 2
            # density sweeps 5% .. 95% across consecutive instances
            density = 0.05 + 0.9 * ((idx % 10) + rng.random()) / 10
            yield generate("gnm", {"n": n, "m": min(pairs, round(pairs * density))}, inst_seed)
        elif family == "regular":
            d = rng.randint(1, max(1, n - 1))
            if (n * d) % 2:
                d -= 1
            yield generate("regular", {"n": n, "d": max(d, 0)}, inst_seed)
        elif family == "planted-paths":
            p = max(1, n // 6)
            yield generate("planted-paths", {"p": p, "noise": rng.randint(0, 3 * p)}, inst_seed)
        else:
            raise GeneratorParamError(_unknown_family(family))
