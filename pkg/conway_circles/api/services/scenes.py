"""Turn polygon and scene documents into polygons, extension specs and check verdicts.

Shared by the command line and the HTTP routes so both surfaces give identical answers.
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from conway_circles.api.config import RenderConfig, SolverConfig
from conway_circles.api.models.base import CheckReportModel, CircleModel, point_json
from conway_circles.api.models.requests import PolygonDocument, RenderOptions, SceneDocument, Selector
from conway_circles.api.models.responses import CheckResponse, ErrorResponse, PolygonResponse
from conway_circles.api.services.conway import (
    PENTAGON_LABELS,
    TRIANGLE_LABELS,
    ConwayCircleResult,
    ExtensionSpec,
    conway_circle,
    conway_extensions_triangle,
    corollary1_extensions,
    corollary2_extensions,
    corollary3_pentagon,
    corollary4_quadrilateral,
    theorem1_condition_check,
    theorem1_family,
    theorem2_condition_check,
    theorem2_family,
    theorem3_condition_check,
    theorem3_even_extensions,
)
from conway_circles.api.services.errors import GeometryError, MissingParameter, SelectorMismatch
from conway_circles.api.services.geom_core import DEFAULT_TOLERANCE, Point2, Tolerance
from conway_circles.api.services.reports import CheckReport
from conway_circles.api.services.tangential import (
    SideLengthSpec,
    TangentialPolygon,
    h0_interval,
    polygon_from_sides,
    validate_tangential,
)
from conway_circles.api.services.verify import condition_check, tangent_length_oracle

logger = logging.getLogger(__name__)

TRIANGLE_SELECTORS = {Selector.CONWAY, Selector.THEOREM1, Selector.COROLLARY1}
ODD_SELECTORS = {Selector.THEOREM2, Selector.COROLLARY2}


def _selector_accepts(selector: Selector, n: int) -> bool:
    if selector in TRIANGLE_SELECTORS:
        return n == 3
    if selector in ODD_SELECTORS:
        return n % 2 == 1
    if selector is Selector.COROLLARY3:
        return n == 5
    if selector is Selector.COROLLARY4:
        return n == 4
    return n % 2 == 0


def check_selector(selector: Optional[Selector], n: int) -> None:
    """Reject selectors whose vertex count or parity does not fit the polygon."""
    if selector is not None and not _selector_accepts(selector, n):
        raise SelectorMismatch(
            f"selector '{selector.value}' does not apply to a polygon with {n} vertices",
            {"selector": selector.value, "n": n},
        )


def default_labels(selector: Optional[Selector], n: int) -> Optional[Sequence[str]]:
    if n == 3 and selector in TRIANGLE_SELECTORS:
        return TRIANGLE_LABELS
    if n == 5 and selector is Selector.COROLLARY3:
        return PENTAGON_LABELS
    return None


def polygon_from_document(
    doc: PolygonDocument,
    tol: Tolerance = DEFAULT_TOLERANCE,
    solver: Optional[SolverConfig] = None,
    labels: Optional[Sequence[str]] = None,
) -> TangentialPolygon:
    solver = solver or SolverConfig()
    labels = doc.labels or labels
    if doc.vertices is not None:
        points = [Point2(float(x), float(y)) for x, y in doc.vertices]
        return validate_tangential(points, tol, labels)
    poly = polygon_from_sides(
        SideLengthSpec(tuple(doc.sides), doc.h0),
        tol,
        xtol=solver.xtol,
        max_iter=solver.max_iter,
        closure_tol=solver.closure_tol,
    )
    if labels:
        poly = dataclasses.replace(poly, labels=tuple(labels))
    return poly


def _corollary4_polygon_document(doc: SceneDocument, tol: Tolerance = DEFAULT_TOLERANCE) -> PolygonDocument:
    """Fill in h0 = d - d0 for quadrilaterals given by sides; refuse contradictory values."""
    polygon = doc.polygon
    if polygon.sides is None:
        return polygon
    d = polygon.sides[3]
    if doc.d0 is None and polygon.h0 is None:
        raise MissingParameter("corollary4 needs d0 or the polygon's h0", {"selector": "corollary4"})
    if doc.d0 is None:
        return polygon
    h0 = d - doc.d0
    if polygon.h0 is not None and abs(polygon.h0 - h0) > tol.for_diameter(d):
        raise SelectorMismatch(
            "d0 and h0 describe different quadrilaterals",
            {"d0": doc.d0, "h0": polygon.h0, "expected_h0": h0},
        )
    return polygon.model_copy(update={"h0": h0})


@dataclass(frozen=True)
class Scene:
    polygon: TangentialPolygon
    spec: ExtensionSpec
    selector: Optional[Selector]


def _require(value: Optional[float], name: str, selector: Selector) -> float:
    if value is None:
        raise MissingParameter(f"selector '{selector.value}' needs {name}", {"selector": selector.value})
    return float(value)


def _selector_spec(
    poly: TangentialPolygon, doc: SceneDocument, tol: Tolerance
) -> ExtensionSpec:
    selector = doc.selector
    if selector is Selector.CONWAY:
        return conway_extensions_triangle(poly)
    if selector is Selector.THEOREM1:
        return theorem1_family(poly, _require(doc.x_a, "x_a", selector))
    if selector is Selector.COROLLARY1:
        return corollary1_extensions(poly)
    if selector is Selector.THEOREM2:
        return theorem2_family(poly, _require(doc.x_a, "x_a", selector), tol)
    if selector is Selector.COROLLARY2:
        return corollary2_extensions(poly)
    if selector is Selector.COROLLARY3:
        return corollary3_pentagon(*poly.side_lengths, tol=tol)
    if selector is Selector.THEOREM3:
        return theorem3_even_extensions(poly)
    a, b, c, d = poly.side_lengths
    d0 = d - poly.h0
    if doc.d0 is not None and abs(doc.d0 - d0) > tol.for_diameter(poly.semiperimeter):
        raise SelectorMismatch(
            "d0 does not match the quadrilateral's tangency point on side d",
            {"d0": doc.d0, "measured_d0": d0},
        )
    return corollary4_quadrilateral(a, b, c, d, d0, tol)


def build_scene(
    doc: SceneDocument,
    tol: Tolerance = DEFAULT_TOLERANCE,
    solver: Optional[SolverConfig] = None,
) -> Scene:
    check_selector(doc.selector, doc.polygon.n)
    polygon_doc = doc.polygon
    if doc.selector is Selector.COROLLARY4:
        polygon_doc = _corollary4_polygon_document(doc, tol)
    poly = polygon_from_document(polygon_doc, tol, solver, default_labels(doc.selector, doc.polygon.n))
    if doc.selector is None:
        spec = ExtensionSpec(tuple(doc.extensions or ()))
    else:
        spec = _selector_spec(poly, doc, tol)
    logger.debug("Scene n=%d selector=%s extensions=%s", poly.n, doc.selector, spec.per_end)
    return Scene(poly, spec, doc.selector)


def condition_kind(scene: Scene) -> str:
    return "formula" if scene.polygon.n % 2 == 0 else "iff"


def scene_condition(scene: Scene, tol: Tolerance = DEFAULT_TOLERANCE) -> CheckReport:
    selector = scene.selector
    if selector in TRIANGLE_SELECTORS:
        return theorem1_condition_check(scene.polygon, scene.spec, tol)
    if selector in ODD_SELECTORS or selector is Selector.COROLLARY3:
        return theorem2_condition_check(scene.polygon, scene.spec, tol)
    if selector in (Selector.THEOREM3, Selector.COROLLARY4):
        return theorem3_condition_check(scene.polygon, scene.spec, tol)
    return condition_check(scene.polygon, scene.spec, tol)


@dataclass(frozen=True)
class SceneCheck:
    scene: Scene
    condition: CheckReport
    circle: ConwayCircleResult
    oracle: CheckReport

    @property
    def passed(self) -> bool:
        return self.condition.passed and self.circle.passed and self.oracle.passed


def check_scene(scene: Scene, tol: Tolerance = DEFAULT_TOLERANCE) -> SceneCheck:
    """Condition check, circle residual and tangent-length oracle for one scene."""
    result = SceneCheck(
        scene=scene,
        condition=scene_condition(scene, tol),
        circle=conway_circle(scene.polygon, scene.spec, tol),
        oracle=tangent_length_oracle(scene.polygon, scene.spec, tol),
    )
    if result.passed:
        logger.info("Check passed for n=%d (residual %.3g)", scene.polygon.n, result.circle.max_residual)
    else:
        logger.info(
            "Check failed for n=%d: condition=%s circle=%s oracle=%s",
            scene.polygon.n, result.condition.passed, result.circle.passed, result.oracle.passed,
        )
    return result


def _points(points: Sequence[Point2]) -> List[Any]:
    return [point_json(p) for p in points]


def polygon_response(poly: TangentialPolygon, tol: Tolerance = DEFAULT_TOLERANCE) -> PolygonResponse:
    interval = None
    if poly.n % 2 == 0:
        try:
            interval = h0_interval(poly.side_lengths, tol)
        except GeometryError as exc:
            logger.warning("No h0 interval for the measured sides: %s", exc)
    return PolygonResponse(
        vertices=_points(poly.vertices),
        incenter=point_json(poly.incenter),
        inradius=poly.inradius,
        side_lengths=list(poly.side_lengths),
        tangent_lengths=list(poly.tangent_lengths),
        tangency_points=_points(poly.tangency_points),
        labels=list(poly.labels) if poly.labels else None,
        h0_interval=interval,
    )


def check_response(check: SceneCheck) -> CheckResponse:
    selector = check.scene.selector
    return CheckResponse(
        passed=check.passed,
        selector=selector.value if selector is not None else None,
        extensions=list(check.scene.spec.per_end),
        condition=CheckReportModel.from_report(check.condition),
        condition_kind=condition_kind(check.scene),
        concyclic=CheckReportModel.from_report(check.circle.to_report()),
        oracle=CheckReportModel.from_report(check.oracle),
        circle=CircleModel.from_circle(check.circle.circle),
        chord_lengths=list(check.circle.chord_lengths),
        endpoints=_points(check.circle.endpoints),
    )


def error_payload(exc: Exception) -> Dict[str, Any]:
    """Machine-readable error object for geometry errors and document validation errors."""
    to_dict = getattr(exc, "to_dict", None)
    if callable(to_dict):
        return ErrorResponse(**to_dict()).model_dump()
    errors = getattr(exc, "errors", None)
    detail: Dict[str, Any] = {}
    if callable(errors):
        detail = {"errors": [{"loc": list(e.get("loc", ())), "msg": e.get("msg", "")} for e in errors()]}
    message = (str(exc).splitlines() or [type(exc).__name__])[0]
    return ErrorResponse(error="invalid_document", message=message, detail=detail).model_dump()


def render_config_for(base: RenderConfig, options: RenderOptions) -> RenderConfig:
    """Configured styling with the scene's own overrides applied."""
    overrides = {key: value for key, value in options.model_dump().items() if value is not None}
    return base.model_copy(update=overrides)
