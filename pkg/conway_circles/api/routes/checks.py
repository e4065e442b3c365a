"""Conway circle checks: condition, circle residual and tangent-length oracle in one call."""
from __future__ import annotations

from fastapi import APIRouter, Depends

from conway_circles.api.config import get_settings
from conway_circles.api.models.requests import SceneDocument
from conway_circles.api.models.responses import CheckResponse
from conway_circles.api.services.errors import GeometryError
from conway_circles.api.services.scenes import build_scene, check_response, check_scene
from conway_circles.deps.validation import geometry_http_error, validate_scene_payload

router = APIRouter(prefix="/checks", tags=["checks"])


@router.post("", response_model=CheckResponse)
async def run_check(payload: SceneDocument = Depends(validate_scene_payload)) -> CheckResponse:
    # A failed check is a normal 200 answer with passed=false
    settings = get_settings()
    tol = settings.tolerance.to_tolerance()
    try:
        scene = build_scene(payload, tol, settings.solver)
        return check_response(check_scene(scene, tol))
    except GeometryError as exc:
        raise geometry_http_error(exc) from exc
