from __future__ import annotations

import pytest
from lxml import etree

from conway_circles.api.config import RenderConfig
from conway_circles.api.services.conway import (
    conway_circle,
    conway_extensions_triangle,
    corollary3_pentagon,
    corollary4_quadrilateral,
)
from conway_circles.api.services.svg_renderer import SVG_NS, render_svg

NS = {"svg": SVG_NS}


def _parse(svg: bytes):
    return etree.fromstring(svg)


def _endpoint_markers(root):
    return root.xpath("//svg:circle[@class='endpoint']", namespaces=NS)


@pytest.fixture
def triangle_svg(right_triangle):
    result = conway_circle(right_triangle, conway_extensions_triangle(right_triangle))
    return render_svg(right_triangle, result)


def test_triangle_figure_structure(triangle_svg):
    assert triangle_svg.startswith(b"<?xml")
    root = _parse(triangle_svg)
    assert root.tag == f"{{{SVG_NS}}}svg"
    assert root.get("version") == "1.1"
    assert len(root.get("viewBox").split()) == 4
    assert len(_endpoint_markers(root)) == 6
    assert len(root.xpath("//svg:circle[@class='incircle']", namespaces=NS)) == 1
    assert len(root.xpath("//svg:circle[@class='conway']", namespaces=NS)) == 1
    assert len(root.xpath("//svg:line[@class='extension']", namespaces=NS)) == 3
    labels = [node.text for node in root.xpath("//svg:text[@class='label']", namespaces=NS)]
    assert labels == ["V1", "V2", "V3", "I"]


def test_rendering_is_byte_deterministic(right_triangle, triangle_svg):
    result = conway_circle(right_triangle, conway_extensions_triangle(right_triangle))
    assert render_svg(right_triangle, result) == triangle_svg


def test_attributes_are_sorted(triangle_svg):
    for node in _parse(triangle_svg).iter():
        keys = list(node.attrib.keys())
        assert keys == sorted(keys)


def test_view_box_contains_every_endpoint(right_triangle, triangle_svg):
    min_x, min_y, width, height = (float(v) for v in _parse(triangle_svg).get("viewBox").split())
    result = conway_circle(right_triangle, conway_extensions_triangle(right_triangle))
    for p in result.endpoints:
        assert min_x < p.x < min_x + width
        # y is flipped in the document
        assert min_y < -p.y < min_y + height


def test_pentagon_and_quadrilateral_marker_counts(pentagon, square):
    pentagon_result = conway_circle(pentagon, corollary3_pentagon(*pentagon.side_lengths))
    assert len(_endpoint_markers(_parse(render_svg(pentagon, pentagon_result)))) == 10
    square_result = conway_circle(square, corollary4_quadrilateral(2.0, 2.0, 2.0, 2.0, 1.0))
    assert len(_endpoint_markers(_parse(render_svg(square, square_result)))) == 8


def test_labels_can_be_switched_off(right_triangle):
    result = conway_circle(right_triangle, conway_extensions_triangle(right_triangle))
    root = _parse(render_svg(right_triangle, result, RenderConfig(labels=False, size=320)))
    assert root.xpath("//svg:text", namespaces=NS) == []
    assert float(root.get("width")) == pytest.approx(320.0)
