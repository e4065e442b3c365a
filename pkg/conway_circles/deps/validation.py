from fastapi import Body, HTTPException, status

from conway_circles.api.models.requests import SceneDocument
from conway_circles.api.services.errors import GeometryError
from conway_circles.api.services.scenes import check_selector


def geometry_http_error(exc: GeometryError) -> HTTPException:
    return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=exc.to_dict())


def validate_scene_payload(payload: SceneDocument = Body(...)) -> SceneDocument:
    """
    FastAPI dependency that rejects scenes whose selector does not fit the polygon.
    Pydantic has already enforced the document shape; this adds the vertex-count/parity rule.
    """
    try:
        check_selector(payload.selector, payload.polygon.n)
    except GeometryError as exc:
        raise geometry_http_error(exc) from exc

    # Raw extension specs must list two values per side
    if payload.extensions is not None and len(payload.extensions) != 2 * payload.polygon.n:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail={
                "error": "arity_mismatch",
                "message": "extension spec does not match the polygon",
                "detail": {"polygon_sides": payload.polygon.n, "entries": len(payload.extensions)},
            },
        )
    return payload
