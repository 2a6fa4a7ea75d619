#!/usr/bin/env python3
from __future__ import annotations

import argparse
import json
import statistics
import time
import tracemalloc
from pathlib import Path
from typing import Callable

from pathcover.generators import gnm
from pathcover.graph_core import Graph
from pathcover.solver import PathCoverSolver

DEFAULT_SIZES = ((500, 1500), (1000, 3000), (2000, 6000))


def _bench(
    name: str,
    fn: Callable[[], int],
    iterations: int,
    warmup: int,
) -> dict[str, float | str]:
    for _ in range(max(0, warmup)):
        fn()

    times: list[float] = []
    values: list[int] = []
    tracemalloc.start()
    for _ in range(iterations):
        start = time.perf_counter()
        values.append(fn())
        times.append(time.perf_counter() - start)
    _current, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()

    times_ms = sorted(t * 1000 for t in times)
    return {
        "name": name,
        "min_ms": min(times_ms),
        "avg_ms": statistics.mean(times_ms),
        "p50_ms": statistics.median(times_ms),
        "max_ms": max(times_ms),
        "value": float(max(values)),
        "peak_kb": peak / 1024.0,
    }


def _solve_fn(g: Graph) -> Callable[[], int]:
    def run() -> int:
        return PathCoverSolver().solve(g).value

    return run


def main() -> None:
    parser = argparse.ArgumentParser(description="Solver scale benchmark (gnm graphs).")
    parser.add_argument("--iterations", type=int, default=3)
    parser.add_argument("--warmup", type=int, default=0)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--size", action="append", default=None, help="n:m, repeatable")
    parser.add_argument("--json", type=Path, default=None)
    parser.add_argument("--max-seconds", type=float, default=60.0)
    args = parser.parse_args()

    sizes = (
        [tuple(int(x) for x in raw.split(":", 1)) for raw in args.size]
        if args.size
        else list(DEFAULT_SIZES)
    )
    results: list[dict[str, float | str]] = []
    for n, m in sizes:
        g = gnm(n, m, args.seed)
        results.append(_bench(f"gnm n={n} m={m}", _solve_fn(g), args.iterations, args.warmup))

    if args.json:
        args.json.parent.mkdir(parents=True, exist_ok=True)
        args.json.write_text(json.dumps(results, indent=2), encoding="utf-8")

    print("Solver benchmark results")
    slow: list[str] = []
    for entry in results:
        max_ms = float(entry["max_ms"])
        print(
            f"- {entry['name']}: "
            f"avg {float(entry['avg_ms']):.1f} ms | "
            f"p50 {float(entry['p50_ms']):.1f} ms | "
            f"max {max_ms:.1f} ms | "
            f"value {int(float(entry['value']))} | "
            f"peak {float(entry['peak_kb']):.1f} KB"
        )
        if max_ms > args.max_seconds * 1000:
            slow.append(str(entry["name"]))
    if slow:
        print(f"Over {args.max_seconds:.0f} s: {', '.join(slow)}")
        raise SystemExit(1)


if __name__ == "__main__":
    main()
