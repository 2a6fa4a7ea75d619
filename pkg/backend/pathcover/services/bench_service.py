"""Banco de certificacion del ratio: genera, resuelve, compara con el oraculo exacto y audita."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Optional

from pathcover.audits import (
    matching_bound_ok,
    mc_bound_ok,
    noncritical_ratio_ok,
    ratio_ok,
    recursion_bound_ok,
)
from pathcover.config import settings
from pathcover.errors import PathCoverError
from pathcover.exact import ExactConfig, exact_opt
from pathcover.generators import GeneratedInstance, bench_instances
from pathcover.graph_core import Graph
from pathcover.logging_utils import get_logger
from pathcover.models import BenchSummary, RunReport
from pathcover.rescue import MOVE_CAP_FACTOR
from pathcover.solver import PathCoverSolver, SolveReport, verify_solution

logger = get_logger(__name__)
ProgressCallback = Callable[[int, int], None]

CSV_COLUMNS = ("instance", "n", "m", "alg", "opt", "ratio", "moves", "depth", "ms")


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)


class BenchService:
    def __init__(
        self,
        workers: int | None = None,
        exact_cfg: ExactConfig | None = None,
        oracle_cap: int | None = None,
        base_case_max_n: int | None = None,
    ) -> None:
        self.workers = workers if workers is not None else settings.bench_workers
        self.exact_cfg = exact_cfg or ExactConfig.from_settings()
        self.oracle_cap = min(oracle_cap or self.exact_cfg.vertex_cap, self.exact_cfg.vertex_cap)
        self.base_case_max_n = base_case_max_n

    def _oracle(self, g: Graph, report: RunReport) -> int | None:
        if g.n > self.oracle_cap:
            return None
        res = exact_opt(g, self.exact_cfg)
        if not res.exact:
            report.violations.append(f"exact oracle ran out of budget at n={g.n}")
            return None
        return res.value

    def _audit_levels(self, solved: SolveReport, report: RunReport, opt: int) -> None:
        top = solved.levels[0]
        alg = solved.solution.value
        if top.branch != "base-case":
            if not matching_bound_ok(top.matched_vertices, opt):
                report.violations.append(f"matching bound: |V(M)|={top.matched_vertices} opt={opt}")
            if not mc_bound_ok(top.mc_vertices, opt):
                report.violations.append(f"M_C bound: |V(M_C)|={top.mc_vertices} opt={opt}")
            if top.branch == "output-components" and top.critical == 0:
                if not noncritical_ratio_ok(opt, alg):
                    report.violations.append(f"noncritical ratio: opt={opt} alg={alg}")
        for level in solved.levels:
            census = level.census
            if level.branch != "recurse" or level.graph is None or level.residual is None:
                continue
            assert census is not None
            opt_g = exact_opt(level.graph, self.exact_cfg).value
            opt_gc = exact_opt(level.residual, self.exact_cfg).value
            if not recursion_bound_ok(opt_g, opt_gc, census.a):
                report.violations.append(
                    f"recursion bound at level {level.depth}: {opt_g} > {opt_gc} + 7*{census.a}"
                )

    @staticmethod
    def _audit_moves(solved: SolveReport, report: RunReport) -> None:
        for level in solved.levels:
            if level.moves > MOVE_CAP_FACTOR * level.n:
                report.violations.append(f"level {level.depth}: {level.moves} moves > 5n")
            trace = level.potential_trace
            if any(b >= a for a, b in zip(trace, trace[1:])):
                report.violations.append(f"level {level.depth}: potential not decreasing {trace}")

    def run_instance(self, idx: int, inst: GeneratedInstance) -> RunReport:
        started = time.perf_counter()
        g = inst.graph
        report = RunReport(instance=idx, family=inst.family, seed=inst.seed, n=g.n, m=g.m, alg=0)
        try:
            solved = PathCoverSolver(self.base_case_max_n, self.exact_cfg).solve_with_report(g)
        except PathCoverError as exc:
            report.violations.append(f"solver error: {type(exc).__name__}: {exc}")
            report.ms = _ms(started)
            return report
        alg = solved.solution.value
        report.alg = alg
        report.moves = solved.moves
        report.depth = solved.depth
        report.timings_ms = dict(solved.levels[0].timings_ms)
        report.violations.extend(solved.violations)
        check = verify_solution(g, solved.solution)
        report.violations.extend(check.problems)
        self._audit_moves(solved, report)

        opt = self._oracle(g, report)
        if opt is not None:
            report.opt = opt
            report.ratio_ok = ratio_ok(opt, alg)
            report.ratio = round(opt / alg, 6) if alg else (1.0 if opt == 0 else None)
            if not report.ratio_ok:
                report.violations.append(f"ratio: opt={opt} alg={alg}")
            self._audit_levels(solved, report, opt)
        if inst.planted and not ratio_ok(inst.planted_value, alg):
            report.violations.append(f"planted value {inst.planted_value} above r * alg={alg}")
        report.ms = _ms(started)
        if report.failed:
            log = get_logger(__name__, instance=idx, family=inst.family)
            log.warning("failed: %s", "; ".join(report.violations))
        return report

    def run(
        self,
        family: str,
        count: int,
        seed: int,
        n_min: int = 5,
        n_max: int = 12,
        progress: Optional[ProgressCallback] = None,
    ) -> BenchSummary:
        started = time.perf_counter()
        instances = list(enumerate(bench_instances(family, count, seed, n_min, n_max)))
        rows: list[RunReport] = []
        total = len(instances)
        done = 0
        if self.workers <= 1 or total <= 1:
            for idx, inst in instances:
                rows.append(self.run_instance(idx, inst))
                done += 1
                if progress:
                    progress(done, total)
        else:
            with ThreadPoolExecutor(max_workers=min(self.workers, total)) as executor:
                future_map = {
                    executor.submit(self.run_instance, idx, inst): idx for idx, inst in instances
                }
                for future in as_completed(future_map):
                    rows.append(future.result())
                    done += 1
                    if progress:
                        progress(done, total)
        rows.sort(key=lambda row: row.instance)
        summary = BenchSummary(family=family, seed=seed, count=total, rows=rows)
        ratios = [(row.ratio, row.instance) for row in rows if row.ratio is not None]
        if ratios:
            summary.max_ratio, summary.max_ratio_instance = max(ratios, key=lambda t: (t[0], -t[1]))
        summary.violations = sum(1 for row in rows if row.failed)
        summary.total_ms = _ms(started)
        logger.info(
            "Bench %s seed=%d: %d instances, max ratio %s, %d violations",
            family,
            seed,
            total,
            summary.max_ratio,
            summary.violations,
        )
        return summary


def _cell(value: object) -> str:
    return "" if value is None else str(value)


def render_csv(summary: BenchSummary, timings: bool = True) -> str:
    """Filas por instancia y una fila `summary`; sin tiempos la salida es reproducible."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in summary.rows:
        writer.writerow(
            [
                row.instance,
                row.n,
                row.m,
                row.alg,
                _cell(row.opt),
                _cell(row.ratio),
                row.moves,
                row.depth,
                row.ms if timings else "",
            ]
        )
    if summary.rows:
        writer.writerow(
            [
                "summary",
                summary.count,
                summary.violations,
                sum(row.alg for row in summary.rows),
                _cell(summary.max_ratio_instance),
                _cell(summary.max_ratio),
                sum(row.moves for row in summary.rows),
                max(row.depth for row in summary.rows),
                summary.total_ms if timings else "",
            ]
        )
    return buf.getvalue()
