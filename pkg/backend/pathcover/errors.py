"""Jerarquia de errores del paquete."""

from __future__ import annotations


class PathCoverError(Exception):
    """Base for every error raised by pathcover."""


class GraphFormatError(PathCoverError, ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class VertexRangeError(PathCoverError, ValueError):
    pass


class InvalidPathError(PathCoverError, ValueError):
    pass


class GeneratorParamError(PathCoverError, ValueError):
    pass


class ExactCapExceededError(PathCoverError, ValueError):
    pass


class StaleTripleError(PathCoverError):
    """The triple no longer matches the current H (H changed after discovery)."""


class FactorInfeasibleError(PathCoverError):
    pass


class StructureError(PathCoverError):
    """A component of H+C does not have the shape the analysis relies on."""


class GuaranteeError(PathCoverError):
    pass


class RescueInvariantError(PathCoverError):
    pass


class AuditError(PathCoverError):
    def __init__(self, audit: str, violations: list[str]) -> None:
        self.audit = audit
        self.violations = list(violations)
        head = "; ".join(self.violations[:3])
        more = f" (+{len(self.violations) - 3} more)" if len(self.violations) > 3 else ""
        super().__init__(f"{audit}: {head}{more}")
