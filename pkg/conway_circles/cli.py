"""Conway circles command line.

Usage:
    conway-circles build --sides 3,4,5
    conway-circles build --sides 1,1,1,1 --h0 0.5
    conway-circles check --sides 3,4,5 --selector conway
    conway-circles check --polygon square.json --extensions 1,1,1,1,1,1,1,1
    conway-circles render --sides 2,2,2,2 --selector corollary4 --d0 1 --out fig.svg
    conway-circles fuzz --seed 7 --trials 500 --odd
    conway-circles serve --port 8000

Documents go to standard output (or --out); logs go to standard error.
Exit codes: 0 pass, 1 check failed, 2 invalid input.
"""
from __future__ import annotations

import functools
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click
from pydantic import ValidationError

from conway_circles import __version__
from conway_circles.api.config import Settings, get_settings
from conway_circles.api.models.requests import PolygonDocument, SceneDocument, Selector
from conway_circles.api.services.conway import conway_circle
from conway_circles.api.services.errors import GeometryError
from conway_circles.api.services.geom_core import Tolerance
from conway_circles.api.services.scenes import (
    build_scene,
    check_response,
    check_scene,
    error_payload,
    polygon_from_document,
    polygon_response,
    render_config_for,
)
from conway_circles.api.services.svg_renderer import render_svg
from conway_circles.api.services.verify import FuzzConfig, fuzz_iff
from conway_circles.utils.numbers import parse_floats, parse_points

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _dumps(data: Any) -> str:
    # Infinity and NaN are not JSON
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def guarded(command: Callable[..., int]) -> Callable[..., None]:
    """Map invalid input to the JSON error object and exit code 2; exit with the command's code."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            code = command(*args, **kwargs)
        except (GeometryError, ValidationError, ValueError) as exc:
            logger.debug("Invalid input: %s", exc)
            click.echo(_dumps(error_payload(exc)), nl=False)
            code = EXIT_INVALID
        click.get_current_context().exit(code)

    return wrapper


def _read_json(path: Optional[str]) -> Optional[Dict[str, Any]]:
    if path is None:
        return None
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{path} must hold a JSON object, not {type(data).__name__}")
    return data


def _tolerance(settings: Settings, rel: Optional[float], abs_floor: Optional[float]) -> Tolerance:
    # flags win over CONWAY_TOLERANCE_REL, which wins over config.yml
    return Tolerance(
        rel=settings.tolerance.rel if rel is None else rel,
        abs_floor=settings.tolerance.abs_floor if abs_floor is None else abs_floor,
    )


def _polygon_data(
    polygon_file: Optional[str],
    sides: Optional[str],
    vertices: Optional[str],
    h0: Optional[float],
    names: Optional[str],
) -> Dict[str, Any]:
    data = _read_json(polygon_file)
    if data is not None:
        return data.get("polygon", data)
    data = {}
    if sides is not None:
        data["sides"] = parse_floats(sides)
    if vertices is not None:
        data["vertices"] = parse_points(vertices)
    if h0 is not None:
        data["h0"] = h0
    if names is not None:
        data["labels"] = [name.strip() for name in names.split(",")]
    return data


def polygon_options(func: Callable) -> Callable:
    options = [
        click.option("--polygon", "polygon_file", type=click.Path(exists=True, dir_okay=False), help="PolygonDocument JSON file."),
        click.option("--sides", help='Side lengths "l1,l2,...", side i runs from V_i to V_(i+1).'),
        click.option("--vertices", help='Vertices "x,y; x,y; ...".'),
        click.option("--h0", type=float, help="Tangent length at V_1 (even polygons given by sides)."),
        click.option("--names", help='Vertex labels "A,B,C".'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def scene_options(func: Callable) -> Callable:
    options = [
        click.option("--scene", "scene_file", type=click.Path(exists=True, dir_okay=False), help="SceneDocument JSON file."),
        click.option("--extensions", help="2n extension lengths, side by side: start then end of each side."),
        click.option("--selector", type=click.Choice([s.value for s in Selector]), help="Theorem selector."),
        click.option("--x-a", "x_a", type=float, help="x at A (theorem1) or at V_1 (theorem2)."),
        click.option("--d0", type=float, help="Tangency offset on side d for corollary4."),
    ]
    for option in reversed(options):
        func = option(func)
    return polygon_options(func)


def tolerance_options(func: Callable) -> Callable:
    func = click.option("--tolerance-abs", "tolerance_abs", type=float, help="Absolute tolerance floor.")(func)
    return click.option("--tolerance-rel", "tolerance_rel", type=float, help="Relative tolerance (times diameter).")(func)


def _scene_document(params: Dict[str, Any], render: Optional[Dict[str, Any]] = None) -> SceneDocument:
    data = _read_json(params.get("scene_file"))
    if data is None:
        data = {
            "polygon": _polygon_data(
                params.get("polygon_file"), params.get("sides"), params.get("vertices"), params.get("h0"), params.get("names")
            ),
            "selector": params.get("selector"),
            "x_a": params.get("x_a"),
            "d0": params.get("d0"),
        }
        if params.get("extensions") is not None:
            data["extensions"] = parse_floats(params["extensions"])
    if render:
        data["render"] = {**data.get("render", {}), **render}
    return SceneDocument.model_validate(data)


@click.group()
@click.version_option(__version__, "-v", "--version", prog_name="conway-circles")
@click.option("--log-level", default=None, help="Logging level (default: LOG_LEVEL or config.yml).")
def cli(log_level: Optional[str]) -> None:
    """Conway circles on triangles and tangential polygons."""
    try:
        level = log_level or os.getenv("LOG_LEVEL") or get_settings().logging.level
    except (ValidationError, ValueError) as exc:
        click.echo(_dumps({"error": "invalid_config", "message": "config.yml could not be loaded", "detail": {"reason": str(exc)}}), nl=False)
        click.get_current_context().exit(EXIT_INVALID)
    logging.basicConfig(level=level.upper(), stream=sys.stderr)


@cli.command()
@polygon_options
@tolerance_options
@click.option("--out", type=click.Path(dir_okay=False), help="Write the document here instead of stdout.")
@guarded
def build(polygon_file, sides, vertices, h0, names, tolerance_rel, tolerance_abs, out) -> int:
    """Construct a tangential polygon and print it as JSON."""
    settings = get_settings()
    tol = _tolerance(settings, tolerance_rel, tolerance_abs)
    doc = PolygonDocument.model_validate(_polygon_data(polygon_file, sides, vertices, h0, names))
    poly = polygon_from_document(doc, tol, settings.solver)
    _emit(_dumps(polygon_response(poly, tol).model_dump()), out)
    return EXIT_PASS


@cli.command()
@scene_options
@tolerance_options
@click.option("--out", type=click.Path(dir_okay=False), help="Write the report here instead of stdout.")
@guarded
def check(tolerance_rel, tolerance_abs, out, **params) -> int:
    """Run the condition check, the circle residual and the tangent-length oracle.

    For even polygons the condition compares against the construction formula
    (condition_kind "formula"), so a concyclic spec built some other way, such as
    a constant offset, still fails it. The concyclic and oracle verdicts do not
    depend on how the spec was built.
    """
    settings = get_settings()
    tol = _tolerance(settings, tolerance_rel, tolerance_abs)
    scene = build_scene(_scene_document(params), tol, settings.solver)
    result = check_scene(scene, tol)
    _emit(_dumps(check_response(result).model_dump()), out)
    return EXIT_PASS if result.passed else EXIT_FAILED


@cli.command()
@scene_options
@tolerance_options
@click.option("--size", type=int, help="Longest figure side in pixels.")
@click.option("--stroke", type=float, help="Stroke width in pixels.")
@click.option("--labels", type=click.Choice(["on", "off"]), help="Vertex labels on or off.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the SVG here instead of stdout.")
@guarded
def render(tolerance_rel, tolerance_abs, size, stroke, labels, out, **params) -> int:
    """Render the scene as an SVG figure."""
    settings = get_settings()
    tol = _tolerance(settings, tolerance_rel, tolerance_abs)
    overrides = {"size": size, "stroke": stroke, "labels": None if labels is None else labels == "on"}
    doc = _scene_document(params, {k: v for k, v in overrides.items() if v is not None})
    scene = build_scene(doc, tol, settings.solver)
    result = conway_circle(scene.polygon, scene.spec, tol)
    svg = render_svg(scene.polygon, result, render_config_for(settings.render, doc.render))
    if out:
        Path(out).write_bytes(svg)
    else:
        click.echo(svg.decode("utf-8"), nl=False)
    return EXIT_PASS


def _fuzz_config(settings: Settings, seed, trials, parity, workers, perturbation) -> FuzzConfig:
    fuzz = settings.fuzz
    if parity == "odd":
        n_range = fuzz.odd_range
    elif parity == "even":
        n_range = fuzz.even_range
    else:
        n_range = [min(fuzz.odd_range[0], fuzz.even_range[0]), max(fuzz.odd_range[1], fuzz.even_range[1])]
    return FuzzConfig(
        seed=fuzz.seed if seed is None else seed,
        trials=fuzz.trials if trials is None else trials,
        n_range=(int(n_range[0]), int(n_range[1])),
        length_range=(float(fuzz.length_range[0]), float(fuzz.length_range[1])),
        perturbation=fuzz.perturbation if perturbation is None else perturbation,
        parity=parity,
        workers=fuzz.workers if workers is None else workers,
        bit_generator=fuzz.bit_generator,
    )


@cli.command()
@click.option("--seed", type=int, help="Root seed; every trial gets its own spawned stream.")
@click.option("--trials", type=int, help="Number of random polygons.")
@click.option("--odd", "parity", flag_value="odd", default=True, help="Odd polygons (default).")
@click.option("--even", "parity", flag_value="even", help="Even polygons.")
@click.option("--any-parity", "parity", flag_value="any", help="Odd and even polygons.")
@click.option("--workers", type=int, help="Worker threads.")
@click.option("--perturbation", type=float, help="Negative-test perturbation; 0 skips negative tests.")
@tolerance_options
@click.option("--out", type=click.Path(dir_okay=False), help="Write the summary here instead of stdout.")
@guarded
def fuzz(seed, trials, parity, workers, perturbation, tolerance_rel, tolerance_abs, out) -> int:
    """Seeded iff fuzzing: theorem specs must pass every check, perturbed specs must fail every check."""
    settings = get_settings()
    tol = _tolerance(settings, tolerance_rel, tolerance_abs)
    summary = fuzz_iff(_fuzz_config(settings, seed, trials, parity, workers, perturbation), tol)
    _emit(_dumps(summary.to_dict()), out)
    return EXIT_PASS if summary.ok else EXIT_FAILED


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
def serve(host: str, port: int) -> None:
    """Serve the HTTP API with uvicorn."""
    import uvicorn

    uvicorn.run("conway_circles.main:app", host=host, port=port)


def main() -> None:
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
