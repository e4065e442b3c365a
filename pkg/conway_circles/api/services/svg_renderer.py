"""Static SVG figures: polygon, extended sides, incircle, Conway circle and the 2n endpoints.

Output is byte-deterministic for a fixed scene: attributes are written in sorted
order and every number goes through the same significant-digit formatting.
"""
from __future__ import annotations

import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from lxml import etree

from conway_circles.api.config import RenderConfig
from conway_circles.api.services.conway import ConwayCircleResult
from conway_circles.api.services.geom_core import Point2
from conway_circles.api.services.tangential import TangentialPolygon
from conway_circles.utils.numbers import fmt

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
LABEL_FONT_PX = 12.0


class _Frame:
    """World-to-document mapping: y is flipped, lengths in pixels are scaled to world units."""

    def __init__(self, points: Iterable[Tuple[float, float]], size: int, margin: float, digits: int) -> None:
        xs, ys = zip(*points)
        span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
        pad = margin * span
        self.min_x = min(xs) - pad
        self.min_y = -max(ys) - pad
        self.width = max(xs) - min(xs) + 2 * pad
        self.height = max(ys) - min(ys) + 2 * pad
        longest = max(self.width, self.height)
        self.pixel_width = size * self.width / longest
        self.pixel_height = size * self.height / longest
        self.world_per_pixel = longest / size
        self.digits = digits

    def num(self, value: float) -> str:
        return fmt(value, self.digits)

    def xy(self, p: Point2) -> Tuple[str, str]:
        return self.num(p.x), self.num(-p.y)

    def px(self, pixels: float) -> str:
        return self.num(pixels * self.world_per_pixel)

    def view_box(self) -> str:
        return " ".join(self.num(v) for v in (self.min_x, self.min_y, self.width, self.height))


def _element(parent: etree._Element, tag: str, attrs: Dict[str, str], text: Optional[str] = None) -> etree._Element:
    node = etree.SubElement(parent, f"{{{SVG_NS}}}{tag}")
    for key in sorted(attrs):
        node.set(key, attrs[key])
    if text is not None:
        node.text = text
    return node


def _circle_box(center: Point2, radius: float) -> List[Tuple[float, float]]:
    return [(center.x - radius, center.y - radius), (center.x + radius, center.y + radius)]


def _vertex_labels(poly: TangentialPolygon) -> Sequence[str]:
    return poly.labels or tuple(f"V{i}" for i in range(1, poly.n + 1))


def _label_anchor(vertex: Point2, incenter: Point2, offset: float) -> Point2:
    dx, dy = vertex - incenter
    norm = math.hypot(dx, dy) or 1.0
    return Point2(vertex.x + offset * dx / norm, vertex.y + offset * dy / norm)


def render_svg(
    poly: TangentialPolygon,
    result: ConwayCircleResult,
    config: Optional[RenderConfig] = None,
) -> bytes:
    config = config or RenderConfig()
    colors = config.colors
    omega = result.circle
    extent = [(p.x, p.y) for p in poly.vertices] + [(p.x, p.y) for p in result.endpoints]
    extent += _circle_box(omega.center, omega.radius)
    frame = _Frame(extent, config.size, config.margin, config.significant_digits)

    root = etree.Element(f"{{{SVG_NS}}}svg", nsmap={None: SVG_NS})
    for key, value in sorted(
        {
            "height": frame.num(frame.pixel_height),
            "version": "1.1",
            "viewBox": frame.view_box(),
            "width": frame.num(frame.pixel_width),
        }.items()
    ):
        root.set(key, value)
    _element(root, "title", {}, f"Conway circle of a tangential {poly.n}-gon")
    stroke = frame.px(config.stroke)

    extensions = _element(root, "g", {"class": "extensions", "fill": "none", "stroke": colors.get("extension", "#7b8794"), "stroke-width": stroke})
    for i in range(poly.n):
        start, end = result.endpoints[2 * i], result.endpoints[2 * i + 1]
        (x1, y1), (x2, y2) = frame.xy(start), frame.xy(end)
        _element(extensions, "line", {"class": "extension", "x1": x1, "x2": x2, "y1": y1, "y2": y2})

    points = " ".join(",".join(frame.xy(v)) for v in poly.vertices)
    _element(
        root,
        "polygon",
        {"class": "polygon", "fill": "none", "points": points, "stroke": colors.get("polygon", "#1f2933"), "stroke-width": stroke},
    )

    for name, circle in (("incircle", poly.incircle), ("conway", omega)):
        cx, cy = frame.xy(circle.center)
        _element(
            root,
            "circle",
            {
                "class": name,
                "cx": cx,
                "cy": cy,
                "fill": "none",
                "r": frame.num(circle.radius),
                "stroke": colors.get(name, "#1f2933"),
                "stroke-width": stroke,
            },
        )

    markers = _element(root, "g", {"class": "endpoints", "fill": colors.get("endpoint", "#d64545")})
    marker_radius = frame.px(config.marker_radius)
    for p in result.endpoints:
        cx, cy = frame.xy(p)
        _element(markers, "circle", {"class": "endpoint", "cx": cx, "cy": cy, "r": marker_radius})

    if config.labels:
        texts = _element(
            root,
            "g",
            {"class": "labels", "fill": colors.get("label", "#1f2933"), "font-family": "sans-serif", "font-size": frame.px(LABEL_FONT_PX)},
        )
        offset = LABEL_FONT_PX * frame.world_per_pixel
        for name, vertex in zip(_vertex_labels(poly), poly.vertices):
            x, y = frame.xy(_label_anchor(vertex, poly.incenter, offset))
            _element(texts, "text", {"class": "label", "text-anchor": "middle", "x": x, "y": y}, name)
        cx, cy = frame.xy(poly.incenter)
        _element(texts, "text", {"class": "label", "text-anchor": "middle", "x": cx, "y": cy}, "I")

    logger.debug("Rendered n=%d figure, viewBox %s", poly.n, frame.view_box())
    return etree.tostring(root, xml_declaration=True, encoding="UTF-8", pretty_print=True)
