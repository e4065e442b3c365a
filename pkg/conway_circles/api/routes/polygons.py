"""Polygon construction route."""
from __future__ import annotations

from fastapi import APIRouter

from conway_circles.api.config import get_settings
from conway_circles.api.models.requests import PolygonDocument
from conway_circles.api.models.responses import PolygonResponse
from conway_circles.api.services.errors import GeometryError
from conway_circles.api.services.scenes import polygon_from_document, polygon_response
from conway_circles.deps.validation import geometry_http_error

router = APIRouter(prefix="/polygons", tags=["polygons"])


@router.post("", response_model=PolygonResponse)
async def build_polygon(payload: PolygonDocument) -> PolygonResponse:
    settings = get_settings()
    tol = settings.tolerance.to_tolerance()
    try:
        poly = polygon_from_document(payload, tol, settings.solver)
        return polygon_response(poly, tol)
    except GeometryError as exc:
        raise geometry_http_error(exc) from exc
