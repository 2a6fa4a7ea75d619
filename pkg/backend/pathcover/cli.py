"""CLI de pathcover: solve, exact, verify, gen, census y bench."""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from pathcover.config import settings
from pathcover.errors import InvalidPathError, PathCoverError
from pathcover.exact import ExactConfig, exact_opt
from pathcover.generators import FAMILIES, generate
from pathcover.graph_core import Graph, Solution, dump_graph, load_graph
from pathcover.logging_utils import configure_logging, get_logger
from pathcover.models import BenchSummary, CensusDocument, ComponentRecord, SolutionDocument
from pathcover.phase1 import dump_workspace
from pathcover.repositories.report_repo import JsonDocumentRepo, write_text_atomic
from pathcover.services.bench_service import BenchService, render_csv
from pathcover.solver import LevelReport, LevelState, PathCoverSolver, verify_solution

EXIT_OK = 0
EXIT_GUARANTEE = 1
EXIT_INPUT = 2
GEN_PARAMS = ("n", "m", "d", "p", "noise")

logger = get_logger(__name__)


def _read_graph(path: str) -> Graph:
    if path == "-":
        return load_graph(sys.stdin.read())
    return load_graph(Path(path).read_bytes())


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text_atomic(Path(out), text)
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)


def _solution_document(g: Graph, s: Solution, **extra: object) -> SolutionDocument:
    return SolutionDocument(
        n=g.n,
        m=g.m,
        value=s.value,
        paths=[[g.labels[v] for v in p] for p in s.paths],
        generated_at=datetime.now(timezone.utc),
        **extra,  # type: ignore[arg-type]
    )


def _dump_json(doc: SolutionDocument | CensusDocument) -> str:
    return json.dumps(doc.model_dump(mode="json"), ensure_ascii=False, indent=2) + "\n"


def cmd_solve(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    solver = PathCoverSolver(base_case_max_n=args.base_case)
    report = solver.solve_with_report(g)
    if args.verify:
        check = verify_solution(g, report.solution)
        if not check.ok:
            for problem in check.problems:
                logger.error("verify: %s", problem)
            return EXIT_GUARANTEE
    doc = _solution_document(g, report.solution, depth=report.depth, moves=report.moves)
    _emit(_dump_json(doc), args.out)
    logger.info("Solved n=%d m=%d: value=%d depth=%d", g.n, g.m, doc.value, doc.depth)
    for problem in report.violations:
        logger.warning("audit: %s", problem)
    return EXIT_GUARANTEE if report.violations else EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    base = ExactConfig.from_settings()
    cfg = ExactConfig(vertex_cap=args.cap or base.vertex_cap, time_budget_s=base.time_budget_s)
    result = exact_opt(g, cfg)
    _emit(_dump_json(_solution_document(g, result.solution, exact=result.exact)), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    doc = JsonDocumentRepo(Path(args.solution), SolutionDocument).load()
    if doc is None:
        raise InvalidPathError(f"cannot read a solution document from {args.solution}")
    by_label = {label: v for v, label in enumerate(g.labels)}
    unknown = sorted({x for p in doc.paths for x in p if x not in by_label})
    if unknown:
        raise InvalidPathError(f"unknown vertices {unknown[:5]}")
    s = Solution.from_paths([by_label[x] for x in p] for p in doc.paths)
    check = verify_solution(g, s)
    if doc.value != s.value:
        logger.error("verify: document value %d but paths cover %d vertices", doc.value, s.value)
        return EXIT_GUARANTEE
    for problem in check.problems:
        logger.error("verify: %s", problem)
    if check.ok:
        logger.info("Solution OK: value=%d", s.value)
    return EXIT_OK if check.ok else EXIT_GUARANTEE


def cmd_gen(args: argparse.Namespace) -> int:
    params = {
        name: getattr(args, name) for name in GEN_PARAMS if getattr(args, name) is not None
    }
    inst = generate(args.family, params, args.seed)
    shown = " ".join(f"{k}={v}" for k, v in sorted(params.items()))
    header = f"{inst.family} {shown} seed={args.seed}"
    lines = [header]
    lines.extend(f"planted {' '.join(str(v + 1) for v in p)}" for p in inst.planted)
    _emit(dump_graph(inst.graph, comment="\n".join(lines)), args.out)
    return EXIT_OK


def census_document(level: LevelState, report: LevelReport) -> CensusDocument:
    census = level.census
    labels = level.graph.labels
    records = [
        ComponentRecord(
            kid=info.kid,
            kind=info.kind,
            center_kind=info.center_kind,
            vertices=[labels[v] for v in info.vertices],
            anchors={str(labels[v]): j for v, j in sorted(info.anchors.items())},
            satellites=len(info.satellites),
            s=info.s,
            opt=info.value,
            census_class=sum(1 for v in info.vertices if v in census.r),
            critical=info.effective_critical,
            responsible=info.responsible,
            improved=info.improved_solution is not None,
        )
        for info in level.analysis.family()
    ]
    return CensusDocument(
        n=report.n,
        m=report.m,
        depth=report.depth,
        matching_size=report.matching_size,
        cover_weight=report.cover_weight,
        moves=report.moves,
        potential_trace=report.potential_trace,
        classes=list(census.classes),
        critical_1=census.critical_1,
        critical_2=census.critical_2,
        a=census.a,
        b=census.b,
        branch=report.branch,
        r=sorted(labels[v] for v in census.r),
        r_c=sorted(labels[v] for v in census.r_c),
        u_c=sorted(labels[v] for v in census.u_c),
        components=records,
        violations=report.violations,
    )


def cmd_census(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    level, report = PathCoverSolver().run_level(g)
    _emit(_dump_json(census_document(level, report)), args.out)
    if args.dump_h:
        dump = dump_workspace(level.workspace, level.analysis.cover_edges)
        write_text_atomic(Path(args.dump_h), dump)
        logger.info("Wrote H dump to %s", args.dump_h)
    return EXIT_GUARANTEE if report.violations else EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    service = BenchService(workers=args.workers, base_case_max_n=args.base_case)

    def progress(done: int, total: int) -> None:
        if done % 100 == 0 or done == total:
            logger.info("bench %d/%d", done, total)

    summary = service.run(
        args.family, args.count, args.seed, args.n_min, args.n_max, progress=progress
    )
    _emit(render_csv(summary, timings=not args.no_timings), args.out)
    if args.report:
        JsonDocumentRepo(Path(args.report), BenchSummary).save(summary)
    return EXIT_GUARANTEE if summary.violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathcover", description=__doc__)
    parser.add_argument(
        "--trace", action="store_true", help="debug logs with the rescue move trace"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="approximate MPC4+ solution as JSON")
    p.add_argument("input", help="graph file ('-' for stdin)")
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--base-case", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="exact optimum for small graphs")
    p.add_argument("input")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check a solution JSON against a graph")
    p.add_argument("input")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--seed", type=int, default=0)
    for name in GEN_PARAMS:
        p.add_argument(f"--{name}", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("census", help="component census after the rescue loop")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--dump-h", default=None, help="write H with M and C overlays")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("bench", help="ratio certification CSV")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-min", type=int, default=5)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--base-case", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--report", default=None, help="also write the BenchSummary JSON")
    p.add_argument("--no-timings", action="store_true", help="leave the ms column empty")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Punto de entrada de la CLI.

    Uso: pathcover [--trace] {solve,exact,verify,gen,census,bench} ...
    Exit codes: 0 ok, 1 violacion de garantia, 2 error de entrada.
    """
    args = build_parser().parse_args(argv)
    configure_logging(force=True, debug=True if args.trace else None)
    if args.trace:
        settings.trace_moves = True
    try:
        return int(args.func(args))
    except (ValueError, OSError) as exc:
        logger.error("Input error: %s", exc)
        return EXIT_INPUT
    except PathCoverError as exc:
        logger.error("Guarantee violation: %s", exc)
        return EXIT_GUARANTEE


if __name__ == "__main__":
    sys.exit(main())
