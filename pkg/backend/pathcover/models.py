from __future__ import annotations

from datetime import datetime

from pydantic import BaseModel, Field
from typing_extensions import Annotated


class SolutionDocument(BaseModel):
    """Solucion serializada; los caminos usan las etiquetas externas del grafo."""

    n: int
    m: int
    value: int
    paths: list[list[int]] = Field(default_factory=list)
    depth: int = 0
    moves: int = 0
    exact: bool | None = None
    generated_at: datetime | None = None


class ComponentRecord(BaseModel):
    kid: int
    kind: str
    center_kind: str
    vertices: list[int] = Field(default_factory=list)
    anchors: dict[str, int] = Field(default_factory=dict)
    satellites: int = 0
    s: int
    opt: int
    census_class: int
    critical: bool = False
    responsible: bool = False
    improved: bool = False


ComponentRecordList = Annotated[list[ComponentRecord], Field(default_factory=list)]


class CensusDocument(BaseModel):
    n: int
    m: int
    depth: int = 0
    matching_size: int = 0
    cover_weight: int = 0
    moves: int = 0
    potential_trace: list[int] = Field(default_factory=list)
    classes: list[int] = Field(default_factory=list)
    critical_1: int = 0
    critical_2: int = 0
    a: int = 0
    b: int = 0
    branch: str = "output-components"
    r: list[int] = Field(default_factory=list)
    r_c: list[int] = Field(default_factory=list)
    u_c: list[int] = Field(default_factory=list)
    components: ComponentRecordList
    violations: list[str] = Field(default_factory=list)


class RunReport(BaseModel):
    """Una fila del bench; `ratio_ok` solo existe cuando se calculo opt."""

    instance: int
    family: str = "gnm"
    seed: int = 0
    n: int
    m: int
    alg: int
    opt: int | None = None
    ratio: float | None = None
    ratio_ok: bool | None = None
    moves: int = 0
    depth: int = 0
    ms: float = 0.0
    timings_ms: dict[str, float] = Field(default_factory=dict)
    violations: list[str] = Field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.ratio_ok is False or bool(self.violations)


RunReportList = Annotated[list[RunReport], Field(default_factory=list)]


class BenchSummary(BaseModel):
    family: str
    seed: int
    count: int = 0
    max_ratio: float | None = None
    max_ratio_instance: int | None = None
    violations: int = 0
    total_ms: float = 0.0
    rows: RunReportList
