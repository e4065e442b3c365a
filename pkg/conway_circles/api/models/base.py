"""JSON shapes shared by the polygon, check and fuzz documents."""
from typing import List, Tuple

from pydantic import BaseModel

from conway_circles.api.services.geom_core import Circle, Point2
from conway_circles.api.services.reports import CheckReport


def point_json(p: Point2) -> Tuple[float, float]:
    return (p.x, p.y)


class CircleModel(BaseModel):
    center: Tuple[float, float]
    radius: float

    @classmethod
    def from_circle(cls, circle: Circle) -> "CircleModel":
        return cls(center=point_json(circle.center), radius=circle.radius)


class CheckReportModel(BaseModel):
    passed: bool
    max_residual: float
    tolerance: float
    details: List[Tuple[str, float]]

    @classmethod
    def from_report(cls, report: CheckReport) -> "CheckReportModel":
        return cls(
            passed=report.passed,
            max_residual=report.max_residual,
            tolerance=report.tolerance,
            details=list(report.details),
        )
