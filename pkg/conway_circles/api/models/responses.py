from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel

from conway_circles.api.models.base import CheckReportModel, CircleModel


class PolygonResponse(BaseModel):
    vertices: List[Tuple[float, float]]
    incenter: Tuple[float, float]
    inradius: float
    side_lengths: List[float]
    tangent_lengths: List[float]
    tangency_points: List[Tuple[float, float]]
    labels: Optional[List[str]] = None
    h0_interval: Optional[Tuple[float, float]] = None


class CheckResponse(BaseModel):
    passed: bool
    selector: Optional[str]
    extensions: List[float]
    condition: CheckReportModel
    # "iff" for odd polygons, "formula" when the condition compares against the even construction
    condition_kind: str
    concyclic: CheckReportModel
    oracle: CheckReportModel
    circle: CircleModel
    chord_lengths: List[float]
    endpoints: List[Tuple[float, float]]


class ErrorResponse(BaseModel):
    error: str
    message: str
    detail: Dict[str, Any]
