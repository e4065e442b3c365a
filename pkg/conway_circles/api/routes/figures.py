"""SVG figure route."""
from __future__ import annotations

from fastapi import APIRouter, Depends, Response

from conway_circles.api.config import get_settings
from conway_circles.api.models.requests import SceneDocument
from conway_circles.api.services.conway import conway_circle
from conway_circles.api.services.errors import GeometryError
from conway_circles.api.services.scenes import build_scene, render_config_for
from conway_circles.api.services.svg_renderer import render_svg
from conway_circles.deps.validation import geometry_http_error, validate_scene_payload

router = APIRouter(prefix="/figures", tags=["figures"])

SVG_MEDIA_TYPE = "image/svg+xml"


@router.post("", response_class=Response)
async def render_figure(payload: SceneDocument = Depends(validate_scene_payload)) -> Response:
    settings = get_settings()
    tol = settings.tolerance.to_tolerance()
    try:
        scene = build_scene(payload, tol, settings.solver)
        result = conway_circle(scene.polygon, scene.spec, tol)
    except GeometryError as exc:
        raise geometry_http_error(exc) from exc
    svg = render_svg(scene.polygon, result, render_config_for(settings.render, payload.render))
    return Response(content=svg, media_type=SVG_MEDIA_TYPE)
