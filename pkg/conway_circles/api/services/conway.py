"""Conway circle constructions for triangles, odd and even tangential polygons.

Every construction reduces to one fact: the endpoint of an extension of length x
beyond a vertex with tangent length t lies at distance sqrt(r^2 + (t + x)^2) from
the incenter, so a spec is concyclic about the incenter exactly when |t + x| is
the same at all 2n side-ends.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from conway_circles.api.services.errors import (
    ArityMismatch,
    ClosureViolated,
    DegenerateInput,
    Infeasible,
    InvalidIndex,
    PitotViolated,
    WrongArity,
)
from conway_circles.api.services.geom_core import (
    DEFAULT_TOLERANCE,
    Circle,
    Point2,
    Tolerance,
    distance,
    effective_tolerance,
    point_on_ray,
    rotate_about,
)
from conway_circles.api.services.reports import CheckReport, make_report
from conway_circles.api.services.tangential import (
    SideLengthSpec,
    TangentialPolygon,
    alternating_sum,
    opposite_side_lengths,
    polygon_from_sides,
    tangent_lengths_from_sides,
)

logger = logging.getLogger(__name__)

# Corollary 3 names pentagon vertices by their opposite sides: A faces a = lambda_1.
PENTAGON_LABELS = ("C", "D", "E", "A", "B")
TRIANGLE_LABELS = ("A", "B", "C")


@dataclass(frozen=True)
class ExtensionSpec:
    """Extension lengths per side-end: (side 1 at V_1, side 1 at V_2, side 2 at V_2, ...)."""

    per_end: Tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.per_end)
        if len(values) < 6 or len(values) % 2:
            raise ArityMismatch("an extension spec has 2n entries with n >= 3", {"entries": len(values)})
        if any(not math.isfinite(v) for v in values):
            raise ArityMismatch("extension lengths must be finite")
        object.__setattr__(self, "per_end", values)

    @classmethod
    def from_vertex_values(cls, xs: Sequence[float]) -> "ExtensionSpec":
        """Both sides meeting at V_i are extended by xs[i - 1]."""
        n = len(xs)
        per_end: List[float] = []
        for i in range(n):
            per_end.extend([xs[i], xs[(i + 1) % n]])
        return cls(tuple(per_end))

    @property
    def n(self) -> int:
        return len(self.per_end) // 2

    def start(self, side: int) -> float:
        """Extension of side `side` beyond V_side."""
        return self.per_end[2 * ((side - 1) % self.n)]

    def end(self, side: int) -> float:
        """Extension of side `side` beyond V_(side+1)."""
        return self.per_end[2 * ((side - 1) % self.n) + 1]

    def vertex_asymmetry(self) -> float:
        """Largest difference between the two extensions meeting at a vertex."""
        return max(abs(self.end(i - 1) - self.start(i)) for i in range(1, self.n + 1))

    def vertex_values(self) -> List[float]:
        """x_i per vertex, taken from the side that starts at V_i."""
        return [self.start(i) for i in range(1, self.n + 1)]


@dataclass(frozen=True)
class ConwayCircleResult:
    circle: Circle
    endpoints: Tuple[Point2, ...]
    chord_lengths: Tuple[float, ...]
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_report(self) -> CheckReport:
        spread = max(self.chord_lengths) - min(self.chord_lengths)
        return make_report(
            self.max_residual,
            self.tolerance,
            [("radius", self.circle.radius), ("chord_spread", spread)],
        )


def _require_arity(poly: TangentialPolygon, spec: ExtensionSpec) -> None:
    if spec.n != poly.n:
        raise ArityMismatch(
            "extension spec does not match the polygon",
            {"polygon_sides": poly.n, "spec_sides": spec.n},
        )


def _require_triangle(poly: TangentialPolygon) -> None:
    if poly.n != 3:
        raise WrongArity("operation is defined for triangles", {"n": poly.n})


def _require_parity(poly_n: int, odd: bool) -> None:
    if (poly_n % 2 == 1) != odd:
        raise WrongArity(
            f"operation is defined for {'odd' if odd else 'even'} polygons",
            {"n": poly_n},
        )


def mu(z: int, m: int) -> int:
    """1-based cyclic index: z mod m, except m when the remainder is 0."""
    if z < 1 or m < 1:
        raise InvalidIndex("mu needs z >= 1 and m >= 1", {"z": z, "m": m})
    remainder = z % m
    return m if remainder == 0 else remainder


def apply_extensions(
    poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE
) -> List[Point2]:
    _require_arity(poly, spec)
    endpoints: List[Point2] = []
    for i in range(1, poly.n + 1):
        v_start, v_end = poly.vertex(i), poly.vertex(i + 1)
        endpoints.append(point_on_ray(v_start, v_end, spec.start(i), tol))
        endpoints.append(point_on_ray(v_end, v_start, spec.end(i), tol))
    return endpoints


def conway_circle(
    poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE
) -> ConwayCircleResult:
    """Circle about the incenter through the first endpoint; residuals over the rest."""
    endpoints = apply_extensions(poly, spec, tol)
    center = poly.incenter
    radius = distance(center, endpoints[0])
    residual = max(abs(distance(center, p) - radius) for p in endpoints)
    chords = tuple(spec.start(i) + poly.side_length(i) + spec.end(i) for i in range(1, poly.n + 1))
    limit = effective_tolerance(endpoints, tol)
    if not all(math.isfinite(v) for v in (radius, residual, limit, *chords)):
        raise DegenerateInput("extensions overflow floating point", {"largest_extension": max(map(abs, spec.per_end))})
    return ConwayCircleResult(
        circle=Circle(center, radius),
        endpoints=tuple(endpoints),
        chord_lengths=chords,
        max_residual=residual,
        tolerance=limit,
    )


def constant_offset_extensions(poly: TangentialPolygon, offset: float) -> ExtensionSpec:
    """x_V = offset - t_V at every vertex: the Conway circle of radius sqrt(r^2 + offset^2)."""
    return ExtensionSpec.from_vertex_values([offset - t for t in poly.tangent_lengths])


# Triangles


def conway_extensions_triangle(tri: TangentialPolygon) -> ExtensionSpec:
    """Each vertex extended by its opposite side."""
    _require_triangle(tri)
    return ExtensionSpec.from_vertex_values(opposite_side_lengths(tri))


def theorem1_values(opposite: Sequence[float], x_at_a: float) -> List[float]:
    la, lb, lc = opposite
    return [x_at_a, x_at_a + lb - la, x_at_a + lc - la]


def theorem1_family(tri: TangentialPolygon, x_at_a: float) -> ExtensionSpec:
    _require_triangle(tri)
    return ExtensionSpec.from_vertex_values(theorem1_values(opposite_side_lengths(tri), x_at_a))


def corollary1_extensions(tri: TangentialPolygon) -> ExtensionSpec:
    """A itself stays on the circle; B and C are extended by the opposite-side differences."""
    return theorem1_family(tri, 0.0)


def theorem1_condition_check(
    tri: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    _require_triangle(tri)
    _require_arity(tri, spec)
    lam = opposite_side_lengths(tri)
    xs = spec.vertex_values()
    details: List[Tuple[str, float]] = []
    for u, v in ((0, 1), (1, 2), (0, 2)):
        violation = abs((xs[u] - xs[v]) - (lam[u] - lam[v]))
        details.append((f"{TRIANGLE_LABELS[u]}{TRIANGLE_LABELS[v]}", violation))
    asymmetry = spec.vertex_asymmetry()
    details.append(("vertex_asymmetry", asymmetry))
    residual = max(value for _, value in details)
    return make_report(residual, effective_tolerance(tri.vertices, tol), details)


def incircle_coincidence_extension(tri: TangentialPolygon) -> float:
    _require_triangle(tri)
    la, lb, lc = opposite_side_lengths(tri)
    return 0.5 * (la - lb - lc)


def mirror_extension(tri: TangentialPolygon, x_at_a: float) -> float:
    """The x_A on the other side of the incircle value that yields the same circle."""
    return 2.0 * incircle_coincidence_extension(tri) - x_at_a


def normalize_extension(tri: TangentialPolygon, x_at_a: float) -> float:
    return max(x_at_a, mirror_extension(tri, x_at_a))


# Odd polygons


def theorem2_values(lengths: Sequence[float], x_1: float, tol: Tolerance = DEFAULT_TOLERANCE) -> List[float]:
    """Propagate x around the odd-step cycle 1, 3, 5, ..., n, 2, 4, ..., n - 1."""
    n = len(lengths)
    _require_parity(n, odd=True)
    lam = {i + 1: float(v) for i, v in enumerate(lengths)}
    xs: Dict[int, float] = {1: float(x_1)}
    i = 1
    for _ in range(n - 1):
        nxt = mu(i + 2, n)
        xs[nxt] = xs[i] - (lam[mu(i + 1, n)] - lam[i])
        i = nxt
    # the wrap equation at i = n - 1 must return to x_1
    gap = abs(xs[i] - (lam[mu(i + 1, n)] - lam[i]) - xs[1])
    if gap > tol.for_diameter(0.5 * sum(lengths)):
        raise ClosureViolated("odd-step propagation did not close", {"gap": gap})
    return [xs[k] for k in range(1, n + 1)]


def theorem2_family(poly: TangentialPolygon, x_1: float, tol: Tolerance = DEFAULT_TOLERANCE) -> ExtensionSpec:
    return ExtensionSpec.from_vertex_values(theorem2_values(poly.side_lengths, x_1, tol))


def theorem2_condition_check(
    poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    _require_parity(poly.n, odd=True)
    _require_arity(poly, spec)
    n = poly.n
    xs = spec.vertex_values()
    worst = 0.0
    for i in range(1, n + 1):
        lhs = xs[i - 1] - xs[mu(i + 2, n) - 1]
        rhs = poly.side_length(mu(i + 1, n)) - poly.side_length(i)
        worst = max(worst, abs(lhs - rhs))
    asymmetry = spec.vertex_asymmetry()
    details = [("equation_violation", worst), ("vertex_asymmetry", asymmetry)]
    return make_report(max(worst, asymmetry), effective_tolerance(poly.vertices, tol), details)


def _parity_sum(lengths: Sequence[float], k: int, before_odd: bool) -> float:
    """Sum of lambda_i over (i < k with i of one parity) or (i > k with the other parity)."""
    before = 1 if before_odd else 0
    total = 0.0
    for i, value in enumerate(lengths, start=1):
        if (i < k and i % 2 == before) or (i > k and i % 2 != before):
            total += value
    return total


def corollary2_values(lengths: Sequence[float]) -> List[float]:
    n = len(lengths)
    _require_parity(n, odd=True)
    return [_parity_sum(lengths, k, before_odd=k % 2 == 1) for k in range(1, n + 1)]


def corollary2_extensions(poly: TangentialPolygon) -> ExtensionSpec:
    """Chords all equal the perimeter."""
    return ExtensionSpec.from_vertex_values(corollary2_values(poly.side_lengths))


def corollary3_values(a: float, b: float, c: float, d: float, e: float) -> Dict[str, float]:
    return {"A": b + e, "B": a + c, "C": b + d, "D": e + c, "E": a + d}


def corollary3_pentagon(
    a: float, b: float, c: float, d: float, e: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> ExtensionSpec:
    """Sides V_1V_2, ..., V_5V_1 = a, ..., e; the pentagon must be realizable."""
    tangent_lengths_from_sides(SideLengthSpec((a, b, c, d, e)), tol)
    labeled = corollary3_values(a, b, c, d, e)
    return ExtensionSpec.from_vertex_values([labeled[label] for label in PENTAGON_LABELS])


def labeled_vertex_values(spec: ExtensionSpec, labels: Sequence[str]) -> Dict[str, float]:
    if len(labels) != spec.n:
        raise ArityMismatch("one label per vertex", {"labels": len(labels), "n": spec.n})
    return dict(zip(labels, spec.vertex_values()))


# Even polygons


def theorem3_values(lengths: Sequence[float], h0: float) -> List[float]:
    """Formula (4) at odd vertices, formula (5) at even vertices."""
    n = len(lengths)
    _require_parity(n, odd=False)
    values = []
    for k in range(1, n + 1):
        if k % 2:
            values.append(_parity_sum(lengths, k, before_odd=True) - h0)
        else:
            values.append(_parity_sum(lengths, k, before_odd=False) + h0)
    return values


def theorem3_even_extensions(poly: TangentialPolygon) -> ExtensionSpec:
    _require_parity(poly.n, odd=False)
    return ExtensionSpec.from_vertex_values(theorem3_values(poly.side_lengths, poly.h0))


def theorem3_condition_check(
    poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    """Distance of `spec` from the extensions the even-polygon formulas prescribe."""
    _require_parity(poly.n, odd=False)
    _require_arity(poly, spec)
    expected = theorem3_even_extensions(poly)
    worst = max(abs(x - y) for x, y in zip(spec.per_end, expected.per_end))
    return make_report(worst, effective_tolerance(poly.vertices, tol), [("formula_deviation", worst)])


# Listed quadrilateral extensions, in the order given, as functions of (a, b, c, d, d0).
COROLLARY4_LISTING: Tuple[Tuple[str, Callable[[float, float, float, float, float], float]], ...] = (
    ("c + d - d0", lambda a, b, c, d, d0: c + d - d0),
    ("a + d0", lambda a, b, c, d, d0: a + d0),
    ("b + d - d0", lambda a, b, c, d, d0: b + d - d0),
    ("b + d - d0", lambda a, b, c, d, d0: b + d - d0),
    ("b + d0", lambda a, b, c, d, d0: b + d0),
)


def corollary4_values(a: float, b: float, c: float, d: float, d0: float) -> List[float]:
    """V_1..V_4 extensions; d0 is measured on side d from the vertex it shares with c."""
    return theorem3_values((a, b, c, d), d - d0)


def corollary4_reconciliation(
    a: float, b: float, c: float, d: float, d0: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> List[Dict[str, object]]:
    """Which listed expressions agree with the formula value at each vertex."""
    limit = tol.for_diameter(0.5 * (a + b + c + d))
    listed = [(label, fn(a, b, c, d, d0)) for label, fn in COROLLARY4_LISTING]
    rows: List[Dict[str, object]] = []
    for vertex, value in enumerate(corollary4_values(a, b, c, d, d0), start=1):
        matches = [index for index, (_, item) in enumerate(listed, start=1) if abs(item - value) <= limit]
        rows.append({"vertex": vertex, "value": value, "listed_items": matches})
    return rows


def corollary4_quadrilateral(
    a: float, b: float, c: float, d: float, d0: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> ExtensionSpec:
    pitot = alternating_sum((a, b, c, d))
    if abs(pitot) > tol.for_diameter(0.5 * (a + b + c + d)):
        raise PitotViolated("a tangential quadrilateral needs a + c == b + d", {"a+c-(b+d)": pitot})
    if not 0 < d0 < d:
        raise Infeasible("the tangency on side d must lie strictly inside it", {"d0": d0, "d": d})
    poly = polygon_from_sides(SideLengthSpec((a, b, c, d), h0=d - d0), tol)
    spec = theorem3_even_extensions(poly)
    rows = corollary4_reconciliation(a, b, c, d, d0, tol)
    unmatched = [row["vertex"] for row in rows if not row["listed_items"]]
    logger.info(
        "Quadrilateral extensions by vertex %s; listed items matched %s; unmatched vertices %s",
        [round(v, 12) for v in spec.vertex_values()],
        [row["listed_items"] for row in rows],
        unmatched,
    )
    return spec


# Chord symmetry


def chord_rotation_check(
    poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    """Rotating chord i about the incenter by the angle between tangency points i and i+1 gives chord i+1."""
    endpoints = apply_extensions(poly, spec, tol)
    center = poly.incenter
    worst = 0.0
    n = poly.n
    for i in range(n):
        t_here, t_next = poly.tangency_points[i], poly.tangency_points[(i + 1) % n]
        angle = math.atan2(t_next.y - center.y, t_next.x - center.x) - math.atan2(
            t_here.y - center.y, t_here.x - center.x
        )
        p, q = (rotate_about(pt, center, angle) for pt in endpoints[2 * i : 2 * i + 2])
        u, v = endpoints[(2 * i + 2) % (2 * n)], endpoints[(2 * i + 3) % (2 * n)]
        mismatch = min(max(distance(p, u), distance(q, v)), max(distance(p, v), distance(q, u)))
        worst = max(worst, mismatch)
    return make_report(worst, effective_tolerance(endpoints, tol), [("chord_mismatch", worst)])
