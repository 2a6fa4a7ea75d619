"""Algoritmo completo: caso base, fases 1-3, rama de umbral, recursion sobre G_c y ensamblado."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Literal

from pathcover.audits import ClassEntry, class_bound_violations, output_branch
from pathcover.components import (
    Analysis,
    ComponentAnalyzer,
    anchor_census,
    verify_satellite_attachment,
    verify_satellites_bad,
)
from pathcover.config import settings
from pathcover.cover import (
    PathCycleCover,
    build_saturation_instance,
    max_weight_path_cycle_cover,
    pruned_minimality_problems,
)
from pathcover.errors import AuditError, GuaranteeError
from pathcover.exact import ExactConfig, exact_opt
from pathcover.graph_core import MIN_PATH_ORDER, Graph, Path, Solution, induced_subgraph
from pathcover.phase1 import (
    HLayout,
    Workspace,
    build_layout,
    init_workspace,
    run_step_1_1,
    run_step_1_2,
    verify_after_triples,
    verify_h_structure,
)
from pathcover.rescue import (
    RescueState,
    run_rescue_loop,
    start_rescue,
    verify_critical_neighbors,
)

logger = logging.getLogger(__name__)

Branch = Literal["base-case", "output-components", "recurse"]
MAX_CENSUS_CLASS = 5


@dataclass(frozen=True)
class Census:
    classes: tuple[int, ...]
    critical_1: int
    critical_2: int
    r: frozenset[int]
    r_c: frozenset[int]
    u_c: frozenset[int]

    @property
    def a(self) -> int:
        return sum(i * count for i, count in enumerate(self.classes))

    @property
    def b(self) -> int:
        return self.critical_1 + 2 * self.critical_2

    def as_dict(self) -> dict[str, object]:
        return {
            "classes": list(self.classes),
            "critical_1": self.critical_1,
            "critical_2": self.critical_2,
            "a": self.a,
            "b": self.b,
            "r": sorted(self.r),
            "r_c": sorted(self.r_c),
            "u_c": sorted(self.u_c),
        }


@dataclass(frozen=True)
class SolutionCheck:
    ok: bool
    problems: tuple[str, ...] = ()


@dataclass
class LevelReport:
    depth: int
    n: int
    m: int
    branch: Branch
    matching_size: int = 0
    matched_vertices: int = 0
    mc_vertices: int = 0
    cover_weight: int = 0
    cover_shortcut: bool = False
    triples: int = 0
    moves: int = 0
    potential_trace: list[int] = field(default_factory=list)
    move_trace: list[str] = field(default_factory=list)
    census: Census | None = None
    critical: int = 0
    violations: list[str] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    graph: Graph | None = None
    residual: Graph | None = None


@dataclass
class LevelState:
    graph: Graph
    depth: int
    workspace: Workspace
    layout: HLayout
    cover: PathCycleCover
    rescue: RescueState
    census: Census
    branch: Branch
    residual: Graph | None = None
    residual_map: tuple[int, ...] = ()

    @property
    def analysis(self) -> Analysis:
        return self.rescue.analysis


@dataclass
class SolveReport:
    solution: Solution
    levels: list[LevelReport]
    elapsed_ms: float = 0.0

    @property
    def depth(self) -> int:
        return max(0, len(self.levels) - 1)

    @property
    def moves(self) -> int:
        return sum(level.moves for level in self.levels)

    @property
    def violations(self) -> list[str]:
        return [f"level {lv.depth}: {p}" for lv in self.levels for p in lv.violations]


def build_census(analysis: Analysis) -> Census:
    r = analysis.r_set()
    classes = [0] * (MAX_CENSUS_CLASS + 1)
    critical_1 = critical_2 = 0
    r_c: set[int] = set()
    u_c: set[int] = set()
    for info in analysis.family():
        i = sum(1 for v in info.vertices if v in r)
        classes[min(i, MAX_CENSUS_CLASS)] += 1
        if not info.effective_critical:
            continue
        critical_1 += i == 1
        critical_2 += i == 2
        for v in info.anchors_with(2):
            r_c.add(v)
            for sat in info.satellites_of(v):
                u_c.update(analysis.layout.components[sat.cid].vertices)
    return Census(
        classes=tuple(classes),
        critical_1=critical_1,
        critical_2=critical_2,
        r=frozenset(r),
        r_c=frozenset(r_c),
        u_c=frozenset(u_c),
    )


def census_and_branch(analysis: Analysis) -> tuple[Census, Branch]:
    census = build_census(analysis)
    if not analysis.critical_components():
        return census, "output-components"
    branch: Branch = "output-components" if output_branch(census.a, census.b) else "recurse"
    return census, branch


def class_entries(analysis: Analysis, census: Census) -> list[ClassEntry]:
    return [
        ClassEntry(
            kid=info.kid,
            i=sum(1 for v in info.vertices if v in census.r),
            critical=info.effective_critical,
            s=info.s,
            opt=info.value,
            downgraded=info.critical and info.improved_solution is not None,
        )
        for info in analysis.family()
    ]


def assemble_component_solution(analysis: Analysis) -> Solution:
    """Union de OPT(K) sobre la familia (mejorada donde K es critica y responsable)."""
    paths: list[Path] = []
    used: set[int] = set()
    for info in analysis.family():
        for p in info.solution.paths:
            clash = used.intersection(p)
            if clash:
                raise GuaranteeError(f"component {info.kid} reuses vertices {sorted(clash)}")
            used.update(p)
            paths.append(p)
    return Solution.from_paths(paths).split()


def anchor_paths(level: LevelState) -> list[Path]:
    analysis = level.analysis
    out: list[Path] = []
    for v in sorted(level.census.r_c):
        info = analysis.component_of_vertex(v)
        if info is None:  # pragma: no cover
            raise GuaranteeError(f"2-anchor {v} has no component")
        out.append(anchor_census(info, analysis.layout).p[v])
    return out


def recurse_and_combine(level: LevelState, residual_solution: Solution) -> Solution:
    """ALG(G_c) devuelto a los ids del nivel, junto con un P_v por cada v de R_c."""
    pv = anchor_paths(level)
    allowed = level.census.r_c | level.census.u_c
    for p in pv:
        if not set(p) <= allowed:
            raise GuaranteeError(f"P_v {p} leaves R_c and U_c")
    combined = Solution.from_paths([*pv, *residual_solution.relabel(level.residual_map).paths])
    check = verify_solution(level.graph, combined)
    if not check.ok:
        raise GuaranteeError(f"combined solution is invalid: {check.problems[:3]}")
    return combined.split()


def verify_solution(g: Graph, s: Solution) -> SolutionCheck:
    problems: list[str] = []
    owner: dict[int, int] = {}
    for idx, p in enumerate(s.paths):
        if len(p) < MIN_PATH_ORDER:
            problems.append(f"path {idx} has order {len(p)}")
        for v in p:
            if not 0 <= v < g.n:
                problems.append(f"path {idx} uses unknown vertex {v}")
                continue
            if v in owner:
                problems.append(f"vertex {v} shared by paths {owner[v]} and {idx}")
            else:
                owner[v] = idx
        for u, v in zip(p, p[1:]):
            if 0 <= u < g.n and 0 <= v < g.n and not g.has_edge(u, v):
                problems.append(f"path {idx}: ({u}, {v}) is not an edge")
    return SolutionCheck(not problems, tuple(problems))


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)


class PathCoverSolver:
    """Resuelve por niveles: cada rama de recursion pasa a G_c sin anidar llamadas."""

    def __init__(
        self,
        base_case_max_n: int | None = None,
        exact_cfg: ExactConfig | None = None,
        run_audits: bool = True,
    ) -> None:
        self.exact_cfg = exact_cfg or ExactConfig.from_settings()
        cap = settings.base_case_max_n if base_case_max_n is None else base_case_max_n
        self.base_case_max_n = min(cap, self.exact_cfg.vertex_cap)
        self.run_audits = run_audits

    def solve(self, g: Graph) -> Solution:
        return self.solve_with_report(g).solution

    def run_level(self, g: Graph, depth: int = 0) -> tuple[LevelState, LevelReport]:
        started = time.perf_counter()
        report = LevelReport(depth=depth, n=g.n, m=g.m, branch="output-components", graph=g)
        violations = report.violations

        ws = init_workspace(g)
        report.triples = run_step_1_1(ws)
        if self.run_audits:
            violations.extend(f"triples: {p}" for p in verify_after_triples(ws))
        run_step_1_2(ws)
        if self.run_audits:
            violations.extend(f"h-structure: {p}" for p in verify_h_structure(ws))
        layout = build_layout(ws)
        report.matching_size = ws.m_set.size
        report.matched_vertices = 2 * ws.m_set.size
        report.timings_ms["phase1"] = _ms(started)

        mark = time.perf_counter()
        si = build_saturation_instance(layout)
        cover = max_weight_path_cycle_cover(si)
        report.cover_weight = cover.weight
        report.cover_shortcut = cover.shortcut
        if self.run_audits:
            if not cover.degree_ok():
                violations.append("cover: a vertex has degree above 2")
            violations.extend(f"cover: {p}" for p in pruned_minimality_problems(si, cover.edges))
        report.timings_ms["cover"] = _ms(mark)

        mark = time.perf_counter()
        analyzer = ComponentAnalyzer(layout)
        state = start_rescue(analyzer, cover.edges)
        if state.analysis.weight != cover.weight:
            violations.append(
                f"cover: weight {cover.weight} but {state.analysis.weight} saturated components"
            )
        run_rescue_loop(state)
        analysis = state.analysis
        report.moves = len(state.trace)
        report.potential_trace = state.potential_trace()
        report.move_trace = [rec.trace_line() for rec in state.trace]
        report.mc_vertices = len(analysis.mc_vertices())
        report.timings_ms["rescue"] = _ms(mark)

        census, branch = census_and_branch(analysis)
        report.census = census
        report.critical = len(analysis.critical_components())
        if self.run_audits:
            violations.extend(f"satellites: {p}" for p in verify_satellites_bad(analysis))
            violations.extend(f"attachment: {p}" for p in verify_satellite_attachment(analysis))
            violations.extend(
                f"critical-neighbors: {p}" for p in verify_critical_neighbors(analysis)
            )
            entries = class_entries(analysis, census)
            violations.extend(f"class-bounds: {p}" for p in class_bound_violations(entries))
        if branch == "recurse" and not (census.r_c or census.u_c):
            violations.append("recurse branch without critical 2-anchors; emitting components")
            branch = "output-components"
        report.branch = branch

        level = LevelState(g, depth, ws, layout, cover, state, census, branch)
        if branch == "recurse":
            keep = [v for v in g.vertices() if v not in census.r_c and v not in census.u_c]
            level.residual, level.residual_map = induced_subgraph(g, keep)
            report.residual = level.residual
        report.timings_ms["total"] = _ms(started)
        logger.debug(
            "Level %d: n=%d |M|=%d weight=%d moves=%d critical=%d A=%d B=%d -> %s",
            depth,
            g.n,
            report.matching_size,
            report.cover_weight,
            report.moves,
            report.critical,
            census.a,
            census.b,
            branch,
        )
        if violations:
            if settings.strict_audits:
                raise AuditError(f"level {depth}", violations)
            for problem in violations:
                logger.warning("Audit at level %d: %s", depth, problem)
        return level, report

    def _base_case(self, g: Graph, depth: int) -> tuple[Solution, LevelReport]:
        started = time.perf_counter()
        result = exact_opt(g, self.exact_cfg)
        report = LevelReport(depth=depth, n=g.n, m=g.m, branch="base-case", graph=g)
        if not result.exact:
            report.violations.append("base case ran out of time; solution is not optimal")
        report.timings_ms["total"] = _ms(started)
        return result.solution, report

    def solve_with_report(self, g: Graph) -> SolveReport:
        started = time.perf_counter()
        reports: list[LevelReport] = []
        stack: list[LevelState] = []
        current = g
        depth = 0
        while True:
            if current.n <= self.base_case_max_n:
                solution, report = self._base_case(current, depth)
                reports.append(report)
                break
            level, report = self.run_level(current, depth)
            reports.append(report)
            if level.branch != "recurse":
                solution = assemble_component_solution(level.analysis)
                break
            stack.append(level)
            assert level.residual is not None
            if level.residual.n >= current.n:  # pragma: no cover
                raise GuaranteeError("recursion did not shrink the graph")
            current = level.residual
            depth += 1
        for level in reversed(stack):
            solution = recurse_and_combine(level, solution)
        check = verify_solution(g, solution)
        if not check.ok:
            raise GuaranteeError(f"solver produced an invalid solution: {check.problems[:3]}")
        elapsed = _ms(started)
        logger.debug(
            "Solved %r: value=%d depth=%d in %.1f ms", g, solution.value, len(stack), elapsed
        )
        return SolveReport(solution, reports, elapsed)


def solve(g: Graph) -> Solution:
    return PathCoverSolver().solve(g)
