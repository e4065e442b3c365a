from __future__ import annotations

from pathlib import Path

import pytest

from conway_circles.api.config import get_settings
from conway_circles.api.services.geom_core import Point2
from conway_circles.api.services.tangential import SideLengthSpec, polygon_from_sides, validate_tangential

REPO_CONFIG = Path(__file__).resolve().parents[2] / "config.yml"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size seeded runs (deselect with -m \"not slow\")")


@pytest.fixture(autouse=True)
def repo_settings(monkeypatch):
    """Every test starts from the repository config.yml with no tolerance override."""
    monkeypatch.setenv("CONFIG_PATH", str(REPO_CONFIG))
    monkeypatch.delenv("CONWAY_TOLERANCE_REL", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def right_triangle():
    """The 3-4-5 triangle with the right angle at A = (0, 0): incenter (1, 1), inradius 1."""
    return validate_tangential([Point2(0.0, 0.0), Point2(4.0, 0.0), Point2(0.0, 3.0)])


@pytest.fixture
def equilateral():
    return polygon_from_sides(SideLengthSpec((1.0, 1.0, 1.0)))


@pytest.fixture
def pentagon():
    """Realizable pentagon with tangent lengths (2, 1, 3, 1, 2) and semiperimeter 9."""
    return polygon_from_sides(SideLengthSpec((3.0, 4.0, 4.0, 3.0, 4.0)))


@pytest.fixture
def square():
    return polygon_from_sides(SideLengthSpec((2.0, 2.0, 2.0, 2.0), h0=1.0))
