"""Operaciones 1-3 sobre C hasta que ninguna aplica, vigiladas por el potencial g."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Literal

from pathcover.components import Analysis, ComponentAnalyzer, Potential
from pathcover.config import settings
from pathcover.errors import RescueInvariantError, StructureError
from pathcover.graph_core import Edge, norm_edge

logger = logging.getLogger(__name__)

MoveKind = Literal["op1", "op2", "op3"]
MOVE_CAP_FACTOR = 5


@dataclass(frozen=True)
class RescueMove:
    kind: MoveKind
    v: int
    v_prime: int
    source_cid: int
    target_cid: int | None
    removed: tuple[Edge, ...]
    # op1 onto a 1-anchor only counts when the critical count drops
    needs_fewer_critical: bool = False

    @property
    def added(self) -> Edge:
        return norm_edge(self.v, self.v_prime)


@dataclass(frozen=True)
class MoveRecord:
    move: RescueMove
    before: Potential
    after: Potential

    def trace_line(self) -> str:
        mv = self.move
        return (
            f"{mv.kind} edge=({mv.v}, {mv.v_prime}) S={mv.source_cid} "
            f"g: {self.before.value} -> {self.after.value}"
        )


@dataclass
class RescueState:
    analyzer: ComponentAnalyzer
    analysis: Analysis
    trace: list[MoveRecord] = field(default_factory=list)
    skipped: int = 0

    @property
    def cover_edges(self) -> frozenset[Edge]:
        return self.analysis.cover_edges

    def potential_trace(self) -> list[int]:
        if not self.trace:
            return [self.analysis.potential().value]
        return [self.trace[0].before.value, *(rec.after.value for rec in self.trace)]


def candidate_moves(state: RescueState) -> Iterator[RescueMove]:
    """Candidatos en orden (v, v'), clasificados como en el analisis de casos."""
    analysis = state.analysis
    g = state.analyzer.g
    comp_of = analysis.layout.comp_of
    cover = analysis.cover_edges
    sources: list[tuple[int, int]] = []
    for info, sat in analysis.critical_satellites():
        for v in analysis.layout.components[sat.cid].vertices:
            sources.append((v, info.kid))
    for v, kid in sorted(sources):
        source_info = analysis.components[kid]
        sat = source_info.satellite(comp_of[v])
        if sat is None:  # pragma: no cover
            continue
        for v_prime in g.neighbors(v):
            cid_prime = comp_of[v_prime]
            if cid_prime == sat.cid or norm_edge(v, v_prime) in cover:
                continue
            if cid_prime < 0:
                logger.debug("Skipping (%d, %d): %d is outside H", v, v_prime, v_prime)
                continue
            target = analysis.components[analysis.comp_kid[cid_prime]]
            if target.kind == "isolated-bad":
                logger.debug("Skipping (%d, %d): isolated bad component", v, v_prime)
                continue
            j = target.anchors.get(v_prime)
            if j == 2 or (j == 1 and v_prime in target.responsible_anchors):
                continue
            if j is not None:
                yield RescueMove("op1", v, v_prime, sat.cid, None, (sat.rescue_edge,), j == 1)
                continue
            target_sat = target.satellite(cid_prime)
            if target_sat is None:
                logger.debug("Skipping (%d, %d): %d is a star leaf", v, v_prime, v_prime)
                continue
            if target.center_kind in ("edge", "star") and len(target.satellites) == 1:
                yield RescueMove("op2", v, v_prime, sat.cid, cid_prime, (sat.rescue_edge,))
            else:
                yield RescueMove(
                    "op3",
                    v,
                    v_prime,
                    sat.cid,
                    cid_prime,
                    (sat.rescue_edge, target_sat.rescue_edge),
                )


def _moved_cover(cover: frozenset[Edge], mv: RescueMove) -> frozenset[Edge]:
    return (cover - set(mv.removed)) | {mv.added}


def simulate_move(state: RescueState, mv: RescueMove) -> Analysis | None:
    """Analisis tras el movimiento, o None si no conserva el peso o no baja el potencial."""
    before = state.analysis
    try:
        after = state.analyzer.analyze(_moved_cover(before.cover_edges, mv))
    except StructureError as exc:
        logger.debug("Move %s (%d, %d) breaks the structure: %s", mv.kind, mv.v, mv.v_prime, exc)
        return None
    if after.weight != before.weight:
        logger.debug("Move %s (%d, %d) changes the cover weight", mv.kind, mv.v, mv.v_prime)
        return None
    old, new = before.potential(), after.potential()
    if new.value >= old.value:
        logger.debug(
            "Move %s (%d, %d) keeps g at %d -> %d", mv.kind, mv.v, mv.v_prime, old.value, new.value
        )
        return None
    if mv.needs_fewer_critical and new.ncc >= old.ncc:
        return None
    return after


def find_move(state: RescueState) -> tuple[RescueMove, Analysis] | None:
    for mv in candidate_moves(state):
        after = simulate_move(state, mv)
        if after is not None:
            return mv, after
        state.skipped += 1
    return None


def apply_move(state: RescueState, mv: RescueMove, after: Analysis | None = None) -> MoveRecord:
    before = state.analysis
    cover = before.cover_edges
    if not all(e in cover for e in mv.removed) or mv.added in cover:
        raise RescueInvariantError(f"move {mv} does not fit the current cover")
    if not state.analyzer.g.has_edge(*mv.added):
        raise RescueInvariantError(f"{mv.added} is not an edge of G")
    if after is None:
        after = state.analyzer.analyze(_moved_cover(cover, mv))
    if after.weight != before.weight:
        raise RescueInvariantError(
            f"{mv.kind} changed the cover weight {before.weight} -> {after.weight}"
        )
    record = MoveRecord(mv, before.potential(), after.potential())
    if record.after.value >= record.before.value:
        raise RescueInvariantError(f"{mv.kind} did not decrease g: {record.trace_line()}")
    state.analysis = after
    state.trace.append(record)
    if settings.trace_moves:
        logger.info("move %s", record.trace_line())
    else:
        logger.debug("move %s", record.trace_line())
    return record


def run_rescue_loop(state: RescueState, max_moves: int | None = None) -> list[MoveRecord]:
    cap = max_moves if max_moves is not None else MOVE_CAP_FACTOR * state.analyzer.g.n
    applied: list[MoveRecord] = []
    while (found := find_move(state)) is not None:
        if len(applied) >= cap:
            raise RescueInvariantError(f"rescue loop exceeded {cap} moves")
        mv, after = found
        applied.append(apply_move(state, mv, after))
    logger.debug("Rescue loop: %d moves, %d skipped candidates", len(applied), state.skipped)
    return applied


def verify_critical_neighbors(analysis: Analysis) -> list[str]:
    """Tras el bucle, cada vecino de un satelite critico en H es 2-ancla o responsable.

    Vertices outside H and isolated bad components are skipped, since no operation
    targets them. A neighbor whose candidate move was rejected because g did not
    drop is still reported; the result is a warning, not a proof of a missed move.
    """
    g = analysis.layout.g
    comp_of = analysis.layout.comp_of
    problems: list[str] = []
    for _info, sat in analysis.critical_satellites():
        members = set(analysis.layout.components[sat.cid].vertices)
        for v in sorted(members):
            for w in g.neighbors(v):
                if w in members or comp_of[w] < 0:
                    continue
                target = analysis.component_of_vertex(w)
                if target is not None and target.kind == "isolated-bad":
                    continue
                if analysis.anchor_degree(w) == 2 or analysis.is_responsible_anchor(w):
                    continue
                problems.append(f"critical satellite {sat.cid}: neighbor {w} of {v} is free")
    return problems


def start_rescue(analyzer: ComponentAnalyzer, cover_edges: frozenset[Edge]) -> RescueState:
    return RescueState(analyzer, analyzer.analyze(cover_edges))
