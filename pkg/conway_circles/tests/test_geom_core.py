from __future__ import annotations

import math

import pytest

from conway_circles.api.services.errors import DegenerateInput, InvalidConfig
from conway_circles.api.services.geom_core import (
    Circle,
    Point2,
    Tolerance,
    circle_through_three_points,
    diameter,
    distance,
    distance_to_line,
    effective_tolerance,
    fit_circle,
    incircle_of_triangle,
    is_strictly_convex,
    rigid_motion,
    rotate_about,
    signed_area,
    to_ccw,
)


def _pts(*coords):
    return [Point2(float(x), float(y)) for x, y in coords]


def test_incircle_of_right_triangle():
    center, r = incircle_of_triangle(*_pts((0, 0), (4, 0), (0, 3)))
    assert center.x == pytest.approx(1.0)
    assert center.y == pytest.approx(1.0)
    assert r == pytest.approx(1.0)


def test_incircle_rejects_collinear_points():
    with pytest.raises(DegenerateInput):
        incircle_of_triangle(*_pts((0, 0), (1, 1), (2, 2)))


def test_point_rejects_non_finite_coordinates():
    with pytest.raises(DegenerateInput):
        Point2(math.nan, 0.0)


def test_circle_requires_positive_radius():
    with pytest.raises(DegenerateInput):
        Circle(Point2(0.0, 0.0), 0.0)


def test_tolerance_scales_with_diameter():
    tol = Tolerance(rel=1e-9, abs_floor=1e-12)
    assert diameter(_pts((0, 0), (3, 4), (1, 1))) == pytest.approx(5.0)
    assert effective_tolerance(_pts((0, 0), (3, 4)), tol) == pytest.approx(5e-9)
    # a single point has no extent, so only the floor applies
    assert effective_tolerance(_pts((2, 2)), tol) == pytest.approx(1e-12)


@pytest.mark.parametrize("rel, abs_floor", [(0.0, 1e-12), (-1e-9, 0.0), (1e-9, -1.0)])
def test_tolerance_validation(rel, abs_floor):
    with pytest.raises(InvalidConfig):
        Tolerance(rel=rel, abs_floor=abs_floor)


def test_to_ccw_keeps_first_vertex():
    clockwise = _pts((0, 0), (0, 1), (1, 1), (1, 0))
    assert signed_area(clockwise) == pytest.approx(-1.0)
    ordered = to_ccw(clockwise)
    assert ordered == _pts((0, 0), (1, 0), (1, 1), (0, 1))
    assert signed_area(ordered) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "coords, expected",
    [
        (((0, 0), (1, 0), (1, 1), (0, 1)), True),
        (((0, 0), (1, 0), (2, 0), (2, 2), (0, 2)), False),
        (((0, 0), (2, 1), (4, 0), (2, 4)), False),
        (((0, 0), (1, 0)), False),
    ],
)
def test_is_strictly_convex(coords, expected):
    assert is_strictly_convex(_pts(*coords)) is expected


def test_distance_to_line_is_unsigned():
    a, b = _pts((0, 0), (1, 0))
    assert distance_to_line(Point2(3.0, 5.0), a, b) == pytest.approx(5.0)
    assert distance_to_line(Point2(-3.0, -5.0), a, b) == pytest.approx(5.0)


def test_circle_through_three_points():
    circle = circle_through_three_points(*_pts((1, 0), (0, 1), (-1, 0)))
    assert circle.center.x == pytest.approx(0.0, abs=1e-12)
    assert circle.center.y == pytest.approx(0.0, abs=1e-12)
    assert circle.radius == pytest.approx(1.0)


def test_circle_through_collinear_points_is_degenerate():
    with pytest.raises(DegenerateInput):
        circle_through_three_points(*_pts((0, 0), (1, 0), (2, 0)))


def test_fit_circle_recovers_center_and_radius():
    points = [Point2(2.0 + 3.0 * math.cos(a), -1.0 + 3.0 * math.sin(a)) for a in [k * 0.7 for k in range(8)]]
    circle = fit_circle(points)
    assert circle.center.x == pytest.approx(2.0, abs=1e-9)
    assert circle.center.y == pytest.approx(-1.0, abs=1e-9)
    assert circle.radius == pytest.approx(3.0, abs=1e-9)


def test_rotate_about_quarter_turn():
    p = rotate_about(Point2(2.0, 1.0), Point2(1.0, 1.0), math.pi / 2)
    assert p.x == pytest.approx(1.0)
    assert p.y == pytest.approx(2.0)


def test_rigid_motion_preserves_distances():
    points = _pts((0, 0), (4, 0), (0, 3))
    moved = rigid_motion(points, 1.1, (5.0, -2.0))
    for i in range(3):
        for j in range(3):
            assert distance(moved[i], moved[j]) == pytest.approx(distance(points[i], points[j]))
