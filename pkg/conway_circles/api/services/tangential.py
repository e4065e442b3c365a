"""Tangential polygons: synthesis from tangent or side lengths, parallel tangents, ingestion.

All indices in the public interface are 1-based and cyclic; storage is 0-based.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from conway_circles.api.services.errors import (
    ArityMismatch,
    ClosureViolated,
    DegenerateInput,
    Infeasible,
    MissingParameter,
    NotConvex,
    NotTangential,
    Unsolvable,
    WrongArity,
)
from conway_circles.api.services.geom_core import (
    DEFAULT_TOLERANCE,
    Circle,
    Point2,
    Tolerance,
    distance,
    distance_to_line,
    effective_tolerance,
    foot_of_perpendicular,
    is_strictly_convex,
    to_ccw,
)

logger = logging.getLogger(__name__)

DEFAULT_XTOL = 1e-14
DEFAULT_MAX_ITER = 200
DEFAULT_CLOSURE_TOL = 1e-9


@dataclass(frozen=True)
class TangentialPolygon:
    vertices: Tuple[Point2, ...]
    incenter: Point2
    inradius: float
    side_lengths: Tuple[float, ...]
    tangency_points: Tuple[Point2, ...]
    tangent_lengths: Tuple[float, ...]
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def perimeter(self) -> float:
        return float(sum(self.side_lengths))

    @property
    def semiperimeter(self) -> float:
        return 0.5 * self.perimeter

    @property
    def h0(self) -> float:
        """Tangent length at V_1 (the free parameter of even polygons)."""
        return self.tangent_lengths[0]

    @property
    def incircle(self) -> Circle:
        return Circle(self.incenter, self.inradius)

    def vertex(self, index: int) -> Point2:
        return self.vertices[(index - 1) % self.n]

    def side_length(self, index: int) -> float:
        return self.side_lengths[(index - 1) % self.n]

    def tangent_length(self, index: int) -> float:
        return self.tangent_lengths[(index - 1) % self.n]

    def invariant_residuals(self, tol: Tolerance = DEFAULT_TOLERANCE) -> Dict[str, float]:
        """Largest violation of each stored invariant, measured from coordinates."""
        n = self.n
        line_spread = 0.0
        tangency_error = 0.0
        pairing_error = 0.0
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            line_spread = max(line_spread, abs(distance_to_line(self.incenter, a, b, tol) - self.inradius))
            foot = foot_of_perpendicular(self.incenter, a, b, tol)
            tangency_error = max(tangency_error, distance(foot, self.tangency_points[i]))
            tangency_error = max(tangency_error, abs(distance(a, foot) - self.tangent_lengths[i]))
            tangency_error = max(tangency_error, abs(distance(b, foot) - self.tangent_lengths[(i + 1) % n]))
            pairing_error = max(
                pairing_error,
                abs(self.tangent_lengths[i] + self.tangent_lengths[(i + 1) % n] - self.side_lengths[i]),
            )
        return {
            "side_line_distance": line_spread,
            "tangency": tangency_error,
            "tangent_pairing": pairing_error,
            "closure": abs(closure_angle(self.tangent_lengths, self.inradius)),
        }


@dataclass(frozen=True)
class SideLengthSpec:
    lengths: Tuple[float, ...]
    h0: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(float(v) for v in self.lengths))
        if len(self.lengths) < 3:
            raise DegenerateInput("a polygon needs at least three sides", {"n": len(self.lengths)})
        if any(not math.isfinite(v) or v <= 0 for v in self.lengths):
            raise Infeasible("side lengths must be positive", {"lengths": list(self.lengths)})
        if self.h0 is not None:
            if len(self.lengths) % 2:
                raise ArityMismatch("h0 applies only to even polygons", {"n": len(self.lengths)})
            if not (0 < self.h0 < self.lengths[-1] and self.h0 < self.lengths[0]):
                raise Infeasible(
                    "h0 must lie strictly inside both sides meeting at V_1",
                    {"h0": self.h0, "lambda_1": self.lengths[0], "lambda_n": self.lengths[-1]},
                )

    @property
    def n(self) -> int:
        return len(self.lengths)


def alternating_sum(lengths: Sequence[float]) -> float:
    """lambda_1 - lambda_2 + lambda_3 - ...; zero is the Pitot condition for even n."""
    lam = np.asarray(lengths, dtype=float)
    signs = np.where(np.arange(len(lam)) % 2 == 0, 1.0, -1.0)
    return float(np.dot(signs, lam))


def _length_scale_tolerance(lengths: Sequence[float], tol: Tolerance) -> float:
    # A tangential polygon's diameter never exceeds its semiperimeter.
    return tol.for_diameter(0.5 * float(sum(lengths)))


def _check_pitot(lengths: Sequence[float], tol: Tolerance) -> None:
    residual = alternating_sum(lengths)
    if abs(residual) > _length_scale_tolerance(lengths, tol):
        raise Unsolvable(
            "alternating side-length sum must vanish for an even polygon",
            {"alternating_sum": residual},
        )


def h0_interval(lengths: Sequence[float], tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[float, float]:
    """Open interval of admissible h0 for even side data (all tangent lengths positive)."""
    n = len(lengths)
    if n % 2 or n < 4:
        raise ArityMismatch("h0 applies only to even polygons", {"n": n})
    _check_pitot(lengths, tol)
    lo, hi = 0.0, math.inf
    # t_k = c_k + s_k * h0 by forward substitution
    c, s = 0.0, 1.0
    for k in range(n):
        if s > 0:
            lo = max(lo, -c)
        else:
            hi = min(hi, c)
        c, s = lengths[k] - c, -s
    if not lo < hi:
        raise Infeasible("no h0 gives positive tangent lengths", {"lo": lo, "hi": hi})
    return lo, hi


def tangent_lengths_from_sides(spec: SideLengthSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> List[float]:
    lam = np.asarray(spec.lengths, dtype=float)
    n = spec.n
    if n % 2:
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        t = 0.5 * np.array([np.dot(signs, np.roll(lam, -i)) for i in range(n)])
    else:
        _check_pitot(spec.lengths, tol)
        if spec.h0 is None:
            raise MissingParameter("even polygons need h0, the tangent length at V_1")
        t = np.empty(n)
        t[0] = spec.h0
        for i in range(n - 1):
            t[i + 1] = lam[i] - t[i]

    system_residual = float(np.max(np.abs(t + np.roll(t, -1) - lam)))
    if system_residual > _length_scale_tolerance(spec.lengths, tol):
        raise Unsolvable("tangent-length system residual too large", {"residual": system_residual})
    floor = _length_scale_tolerance(spec.lengths, tol)
    if np.any(t <= floor):
        raise Infeasible(
            "induced tangent lengths must be positive",
            {"tangent_lengths": [float(v) for v in t]},
        )
    return [float(v) for v in t]


def closure_angle(tangent_lengths: Sequence[float], r: float) -> float:
    """Sum of 2*atan(t_i / r) minus a full turn; decreasing in r."""
    t = np.asarray(tangent_lengths, dtype=float)
    return float(2.0 * np.arctan(t / r).sum() - 2.0 * math.pi)


def inradius_from_tangent_lengths(
    tangent_lengths: Sequence[float],
    xtol: float = DEFAULT_XTOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    t = [float(v) for v in tangent_lengths]
    if len(t) < 3:
        raise DegenerateInput("a polygon needs at least three tangent lengths", {"n": len(t)})
    if any(not math.isfinite(v) or v <= 0 for v in t):
        raise Infeasible("tangent lengths must be positive", {"tangent_lengths": t})

    upper = sum(t)
    lower = upper
    while closure_angle(t, lower) <= 0:
        lower *= 0.5
        if lower < 1e-300:
            raise DegenerateInput("could not bracket the inradius", {"tangent_lengths": t})
    logger.debug("Inradius bracket [%g, %g] for n=%d", lower, upper, len(t))
    root = bisect(
        lambda r: closure_angle(t, r), lower, upper, xtol=xtol, rtol=max(xtol, 4 * np.finfo(float).eps),
        maxiter=max_iter,
    )
    logger.debug("Inradius %.17g closure residual %.3g", root, closure_angle(t, root))
    return float(root)


def _assemble(
    vertices: Sequence[Point2],
    incenter: Point2,
    inradius: float,
    tangency_points: Sequence[Point2],
    tangent_lengths: Sequence[float],
    labels: Optional[Sequence[str]] = None,
) -> TangentialPolygon:
    n = len(vertices)
    sides = tuple(distance(vertices[i], vertices[(i + 1) % n]) for i in range(n))
    return TangentialPolygon(
        vertices=tuple(vertices),
        incenter=incenter,
        inradius=float(inradius),
        side_lengths=sides,
        tangency_points=tuple(tangency_points),
        tangent_lengths=tuple(float(v) for v in tangent_lengths),
        labels=tuple(labels) if labels else None,
    )


def build_polygon(
    tangent_lengths: Sequence[float],
    r: float,
    closure_tol: float = DEFAULT_CLOSURE_TOL,
) -> TangentialPolygon:
    """Incenter at the origin, the tangency point of side 1 on the +x axis, counterclockwise."""
    t = np.asarray(tangent_lengths, dtype=float)
    if len(t) < 3 or np.any(t <= 0) or not r > 0:
        raise Infeasible("build_polygon needs n >= 3, positive tangent lengths and r > 0")
    residual = closure_angle(t, r)
    if abs(residual) > closure_tol:
        raise ClosureViolated("tangent lengths and inradius do not close", {"closure_residual": residual})

    half = np.arctan(t / r)
    # tangency point of side i sits at phi_i; phi_{i+1} = phi_i + 2*atan(t_{i+1}/r)
    phi = np.concatenate([[0.0], np.cumsum(2.0 * np.roll(half, -1))[:-1]])
    vertex_angles = phi - half
    reach = np.hypot(r, t)
    vertices = [Point2(float(d * math.cos(a)), float(d * math.sin(a))) for d, a in zip(reach, vertex_angles)]
    tangency = [Point2(float(r * math.cos(a)), float(r * math.sin(a))) for a in phi]
    return _assemble(vertices, Point2(0.0, 0.0), r, tangency, t)


def polygon_from_sides(
    spec: SideLengthSpec,
    tol: Tolerance = DEFAULT_TOLERANCE,
    xtol: float = DEFAULT_XTOL,
    max_iter: int = DEFAULT_MAX_ITER,
    closure_tol: float = DEFAULT_CLOSURE_TOL,
) -> TangentialPolygon:
    t = tangent_lengths_from_sides(spec, tol)
    r = inradius_from_tangent_lengths(t, xtol=xtol, max_iter=max_iter)
    return build_polygon(t, r, closure_tol)


def _tangent_lines_polygon(
    normals: np.ndarray, circle: Circle, labels: Optional[Sequence[str]] = None
) -> TangentialPolygon:
    """Polygon whose side i lies on the tangent line with outward unit normal normals[i]."""
    n = len(normals)
    c = circle.center.as_array()
    offsets = normals @ c + circle.radius
    vertices: List[Point2] = []
    for i in range(n):
        lhs = np.array([normals[i - 1], normals[i]])
        if abs(np.linalg.det(lhs)) < 1e-12:
            raise DegenerateInput("consecutive sides are parallel", {"side": i + 1})
        vertices.append(Point2.from_array(np.linalg.solve(lhs, [offsets[i - 1], offsets[i]])))
    tangency = [Point2.from_array(c + circle.radius * normals[i]) for i in range(n)]
    tangent_lengths = [distance(vertices[i], tangency[i]) for i in range(n)]
    return _assemble(vertices, circle.center, circle.radius, tangency, tangent_lengths, labels)


def _outward_normals(points: Sequence[Point2]) -> np.ndarray:
    coords = np.array([[p.x, p.y] for p in points], dtype=float)
    edges = np.roll(coords, -1, axis=0) - coords
    normals = np.column_stack([edges[:, 1], -edges[:, 0]])
    return normals / np.linalg.norm(normals, axis=1)[:, None]


def parallel_tangential_polygon(
    convex: Sequence[Point2], circle: Circle, tol: Tolerance = DEFAULT_TOLERANCE
) -> TangentialPolygon:
    """Successive tangents to `circle`, each parallel to the matching side of `convex`."""
    points = to_ccw(convex)
    if not is_strictly_convex(points, tol):
        raise DegenerateInput("input polygon must be strictly convex")
    return _tangent_lines_polygon(_outward_normals(points), circle)


def validate_tangential(
    vertices: Sequence[Point2],
    tol: Tolerance = DEFAULT_TOLERANCE,
    labels: Optional[Sequence[str]] = None,
) -> TangentialPolygon:
    """Recover the incircle of a user-supplied polygon, or explain why there is none."""
    if len(vertices) < 3:
        raise DegenerateInput("a polygon needs at least three vertices", {"n": len(vertices)})
    if labels is not None and len(labels) != len(vertices):
        raise ArityMismatch("one label per vertex", {"labels": len(labels), "vertices": len(vertices)})
    ordered = to_ccw(vertices)
    if labels is not None and ordered != list(vertices):
        labels = [labels[0]] + list(labels)[:0:-1]
    if not is_strictly_convex(ordered, tol):
        raise NotConvex("polygon is not strictly convex")

    # inward normal m_i: m_i . (p - V_i) = r on every side line
    inward = -_outward_normals(ordered)
    coords = np.array([[p.x, p.y] for p in ordered], dtype=float)
    problem = np.column_stack([inward, -np.ones(len(ordered))])
    rhs = np.einsum("ij,ij->i", inward, coords)
    (px, py, r), *_ = np.linalg.lstsq(problem, rhs, rcond=None)
    center = Point2(float(px), float(py))

    side_distances = inward @ center.as_array() - rhs
    spread = float(side_distances.max() - side_distances.min())
    limit = effective_tolerance(ordered, tol)
    if spread > limit or not r > limit:
        raise NotTangential(
            "no circle is tangent to every side",
            {"max_side_line_distance_spread": spread, "tolerance": limit},
        )
    return _ingested(ordered, center, float(r), labels, tol)


def _ingested(
    ordered: Sequence[Point2],
    center: Point2,
    r: float,
    labels: Optional[Sequence[str]],
    tol: Tolerance,
) -> TangentialPolygon:
    n = len(ordered)
    tangency = [foot_of_perpendicular(center, ordered[i], ordered[(i + 1) % n], tol) for i in range(n)]
    tangent_lengths = [distance(ordered[i], tangency[i]) for i in range(n)]
    return _assemble(ordered, center, r, tangency, tangent_lengths, labels)


def opposite_side_lengths(tri: TangentialPolygon) -> Tuple[float, float, float]:
    """(lambda_A, lambda_B, lambda_C): the side opposite A = V_1, B = V_2, C = V_3."""
    if tri.n != 3:
        raise WrongArity("opposite sides are defined for triangles", {"n": tri.n})
    lam = tri.side_lengths
    return lam[1], lam[2], lam[0]
