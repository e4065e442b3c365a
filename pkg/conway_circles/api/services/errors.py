from __future__ import annotations

from typing import Any, Dict, Optional


class GeometryError(ValueError):
    """Base error for invalid geometric input; `code` is stable and machine-readable."""

    code = "geometry_error"

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = detail or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message, "detail": self.detail}


class DegenerateInput(GeometryError):
    code = "degenerate"


class Infeasible(GeometryError):
    code = "infeasible"


class Unsolvable(GeometryError):
    code = "unsolvable"


class MissingParameter(GeometryError):
    code = "missing_parameter"


class ClosureViolated(GeometryError):
    code = "closure_violated"


class NotTangential(GeometryError):
    code = "not_tangential"


class NotConvex(GeometryError):
    code = "not_convex"


class WrongArity(GeometryError):
    code = "wrong_arity"


class InvalidIndex(GeometryError):
    code = "invalid_index"


class ArityMismatch(GeometryError):
    code = "arity_mismatch"


class PitotViolated(GeometryError):
    code = "pitot_violated"


class SelectorMismatch(GeometryError):
    code = "selector_mismatch"


class InvalidConfig(GeometryError):
    code = "invalid_config"
