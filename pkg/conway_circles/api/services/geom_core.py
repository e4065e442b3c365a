"""Plane primitives and the scale-aware tolerance policy shared by every construction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from conway_circles.api.services.errors import DegenerateInput, InvalidConfig


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateInput(f"non-finite coordinate ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Point2":
        return cls(float(values[0]), float(values[1]))

    def __sub__(self, other: "Point2") -> Tuple[float, float]:
        return (self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Circle:
    center: Point2
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DegenerateInput(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-9
    abs_floor: float = 1e-12

    def __post_init__(self) -> None:
        if not self.rel > 0 or self.abs_floor < 0:
            raise InvalidConfig("tolerance requires rel > 0 and abs_floor >= 0", {"rel": self.rel, "abs_floor": self.abs_floor})

    def for_diameter(self, diameter: float) -> float:
        return max(self.rel * diameter, self.abs_floor)


DEFAULT_TOLERANCE = Tolerance()


def distance(p: Point2, q: Point2) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def diameter(points: Iterable[Point2]) -> float:
    coords = np.array([[p.x, p.y] for p in points], dtype=float)
    if len(coords) < 2:
        return 0.0
    return float(pdist(coords).max())


def effective_tolerance(points: Iterable[Point2], tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    return tol.for_diameter(diameter(points))


def signed_area(points: Sequence[Point2]) -> float:
    """Shoelace area; positive for counterclockwise order."""
    coords = np.array([[p.x, p.y] for p in points], dtype=float)
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def to_ccw(points: Sequence[Point2]) -> List[Point2]:
    """Return the vertices in counterclockwise order, keeping the first vertex first."""
    pts = list(points)
    if signed_area(pts) < 0:
        return [pts[0]] + pts[:0:-1]
    return pts


def is_strictly_convex(points: Sequence[Point2], tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True when every turn has the same sign, no turn is flat and the boundary winds once."""
    n = len(points)
    if n < 3:
        return False
    scale = effective_tolerance(points, tol)
    sign = 0
    turning = 0.0
    for i in range(n):
        a, b, c = points[i], points[(i + 1) % n], points[(i + 2) % n]
        ab = b - a
        bc = c - b
        cross = ab[0] * bc[1] - ab[1] * bc[0]
        # cross is an area; compare against tolerance times the edge scale
        if abs(cross) <= scale * max(math.hypot(*ab), math.hypot(*bc), scale):
            return False
        current = 1 if cross > 0 else -1
        if sign and current != sign:
            return False
        sign = current
        turning += math.atan2(cross, ab[0] * bc[0] + ab[1] * bc[1])
    return abs(abs(turning) - 2 * math.pi) < 1e-6


def incircle_of_triangle(
    a: Point2, b: Point2, c: Point2, tol: Tolerance = DEFAULT_TOLERANCE
) -> Tuple[Point2, float]:
    """Incenter as the side-length weighted vertex average; radius = area / semiperimeter."""
    la = distance(b, c)
    lb = distance(c, a)
    lc = distance(a, b)
    area = abs(signed_area([a, b, c]))
    d = max(la, lb, lc)
    if area <= tol.for_diameter(d) * d:
        raise DegenerateInput("triangle area below tolerance", {"area": area})
    perimeter = la + lb + lc
    center = Point2(
        (la * a.x + lb * b.x + lc * c.x) / perimeter,
        (la * a.y + lb * b.y + lc * c.y) / perimeter,
    )
    return center, area / (0.5 * perimeter)


def _direction(line_a: Point2, line_b: Point2, tol: Tolerance) -> Tuple[np.ndarray, float]:
    vec = line_b.as_array() - line_a.as_array()
    length = float(np.linalg.norm(vec))
    if length <= tol.abs_floor:
        raise DegenerateInput("line endpoints coincide", {"a": [line_a.x, line_a.y]})
    return vec / length, length


def foot_of_perpendicular(
    p: Point2, line_a: Point2, line_b: Point2, tol: Tolerance = DEFAULT_TOLERANCE
) -> Point2:
    unit, _ = _direction(line_a, line_b, tol)
    base = line_a.as_array()
    return Point2.from_array(base + float(np.dot(p.as_array() - base, unit)) * unit)


def distance_to_line(p: Point2, line_a: Point2, line_b: Point2, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    return distance(p, foot_of_perpendicular(p, line_a, line_b, tol))


def point_on_ray(origin: Point2, through: Point2, dist: float, tol: Tolerance = DEFAULT_TOLERANCE) -> Point2:
    """Point on the extension of segment through->origin beyond origin; negative dist falls back toward `through`."""
    unit, _ = _direction(through, origin, tol)
    return Point2.from_array(origin.as_array() + dist * unit)


def circle_through_three_points(
    p: Point2, q: Point2, r: Point2, tol: Tolerance = DEFAULT_TOLERANCE
) -> Circle:
    d = diameter([p, q, r])
    twice_area = 2.0 * abs(signed_area([p, q, r]))
    if twice_area <= tol.for_diameter(d) * d:
        raise DegenerateInput("points are collinear")
    # |X - p|^2 = |X - q|^2 = |X - r|^2, linear in X
    lhs = 2.0 * np.array([q.as_array() - p.as_array(), r.as_array() - p.as_array()])
    rhs = np.array(
        [
            q.x ** 2 + q.y ** 2 - p.x ** 2 - p.y ** 2,
            r.x ** 2 + r.y ** 2 - p.x ** 2 - p.y ** 2,
        ]
    )
    center = Point2.from_array(np.linalg.solve(lhs, rhs))
    return Circle(center, distance(center, p))


def fit_circle(points: Sequence[Point2]) -> Circle:
    """Algebraic least-squares circle: 2 xc x + 2 yc y + c = x^2 + y^2."""
    if len(points) < 3:
        raise DegenerateInput("circle fit needs at least three points")
    coords = np.array([[p.x, p.y] for p in points], dtype=float)
    problem = np.column_stack([2.0 * coords, np.ones(len(coords))])
    rhs = (coords ** 2).sum(axis=1)
    (cx, cy, c), *_ = np.linalg.lstsq(problem, rhs, rcond=None)
    return Circle(Point2(float(cx), float(cy)), math.sqrt(c + cx ** 2 + cy ** 2))


def rotate_about(p: Point2, center: Point2, angle: float) -> Point2:
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    dx, dy = p - center
    return Point2(center.x + cos_a * dx - sin_a * dy, center.y + sin_a * dx + cos_a * dy)


def rigid_motion(points: Sequence[Point2], angle: float, shift: Tuple[float, float]) -> List[Point2]:
    """Rotate about the origin, then translate."""
    origin = Point2(0.0, 0.0)
    moved = []
    for p in points:
        rotated = rotate_about(p, origin, angle)
        moved.append(Point2(rotated.x + shift[0], rotated.y + shift[1]))
    return moved
