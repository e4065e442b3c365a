from __future__ import annotations

import json
import math

import pytest
from click.testing import CliRunner
from lxml import etree

from conway_circles.cli import cli

NS = {"svg": "http://www.w3.org/2000/svg"}


@pytest.fixture
def runner():
    return CliRunner()


def _json(result):
    return json.loads(result.stdout)


def test_build_right_triangle(runner):
    result = runner.invoke(cli, ["build", "--sides", "3,4,5"])
    assert result.exit_code == 0
    doc = _json(result)
    assert doc["inradius"] == pytest.approx(1.0)
    assert doc["tangent_lengths"] == pytest.approx([2.0, 1.0, 3.0])
    assert len(doc["vertices"]) == 3
    assert doc["h0_interval"] is None


def test_build_unit_square(runner):
    result = runner.invoke(cli, ["build", "--sides", "1,1,1,1", "--h0", "0.5"])
    assert result.exit_code == 0
    doc = _json(result)
    assert doc["inradius"] == pytest.approx(0.5)
    assert doc["side_lengths"] == pytest.approx([1.0, 1.0, 1.0, 1.0])
    assert doc["h0_interval"] == pytest.approx([0.0, 1.0])


def test_build_pitot_violation_is_invalid_input(runner):
    result = runner.invoke(cli, ["build", "--sides", "1,2,1,1", "--h0", "0.3"])
    assert result.exit_code == 2
    assert _json(result)["error"] == "unsolvable"


@pytest.mark.parametrize(
    "args, code",
    [
        (["build", "--sides", "3,4,5", "--vertices", "0,0; 4,0; 0,3"], "invalid_document"),
        (["build", "--sides", "3,4,5", "--h0", "1"], "invalid_document"),
        (["build", "--sides", "1,2,3,4,5"], "infeasible"),
        (["build", "--vertices", "0,0; 2,0; 2,1; 0,1"], "not_tangential"),
        (["build", "--sides", "3,x,5"], "invalid_document"),
    ],
)
def test_build_error_objects(runner, args, code):
    result = runner.invoke(cli, args)
    assert result.exit_code == 2
    error = _json(result)
    assert error["error"] == code
    assert set(error) == {"error", "message", "detail"}


def test_check_classic_conway(runner):
    result = runner.invoke(cli, ["check", "--sides", "3,4,5", "--selector", "conway"])
    assert result.exit_code == 0
    report = _json(result)
    assert report["passed"] is True
    assert report["circle"]["radius"] == pytest.approx(math.sqrt(37.0))
    assert report["chord_lengths"] == pytest.approx([12.0, 12.0, 12.0])
    assert report["condition"]["passed"] and report["concyclic"]["passed"] and report["oracle"]["passed"]


def test_check_raw_extensions(runner):
    # x at V1, V2, V3 = 4, 5, 3, listed per side end
    passing = runner.invoke(cli, ["check", "--sides", "3,4,5", "--extensions", "4,5,5,3,3,4"])
    assert passing.exit_code == 0
    failing = runner.invoke(cli, ["check", "--sides", "3,4,5", "--extensions", "4,5,5,3.1,3.1,4"])
    assert failing.exit_code == 1
    report = _json(failing)
    assert report["passed"] is False
    assert report["concyclic"]["max_residual"] > 1e-3
    assert not report["condition"]["passed"]
    assert not report["oracle"]["passed"]


@pytest.mark.parametrize(
    "args, code",
    [
        (["check", "--sides", "3,4,5", "--extensions", "1,1,1,1"], "arity_mismatch"),
        (["check", "--sides", "3,4,5", "--extensions", "1,1,1,1,1,1,1,1"], "arity_mismatch"),
        (["check", "--sides", "2,2,2,2", "--h0", "1", "--selector", "corollary2"], "selector_mismatch"),
        (["check", "--sides", "3,4,5", "--selector", "theorem1"], "missing_parameter"),
        (["check", "--sides", "3,4,5"], "invalid_document"),
    ],
)
def test_check_invalid_input(runner, args, code):
    result = runner.invoke(cli, args)
    assert result.exit_code == 2
    assert _json(result)["error"] == code


@pytest.mark.parametrize(
    "build_args, selector_args",
    [
        (["--sides", "3,4,5"], ["--selector", "corollary1"]),
        (["--sides", "3,4,5"], ["--selector", "theorem1", "--x-a", "0.25"]),
        (["--sides", "3,4,4,3,4"], ["--selector", "theorem2", "--x-a", "1.5"]),
        (["--sides", "3,4,4,3,4"], ["--selector", "corollary2"]),
        (["--sides", "1,1,1,1", "--h0", "0.5"], ["--selector", "theorem3"]),
        (["--sides", "5,4,2,3", "--h0", "2.3"], ["--selector", "corollary4"]),
    ],
)
def test_build_output_round_trips_through_check(runner, tmp_path, build_args, selector_args):
    polygon_file = tmp_path / "polygon.json"
    built = runner.invoke(cli, ["build", *build_args, "--out", str(polygon_file)])
    assert built.exit_code == 0
    checked = runner.invoke(cli, ["check", "--polygon", str(polygon_file), *selector_args])
    assert checked.exit_code == 0, checked.stdout


def test_check_corollary4_from_sides_and_d0(runner):
    result = runner.invoke(cli, ["check", "--sides", "2,2,2,2", "--selector", "corollary4", "--d0", "1"])
    assert result.exit_code == 0
    assert _json(result)["extensions"] == pytest.approx([3.0] * 8)


def test_check_corollary4_rejects_contradictory_d0(runner):
    result = runner.invoke(cli, ["check", "--sides", "2,2,2,2", "--h0", "1", "--selector", "corollary4", "--d0", "0.5"])
    assert result.exit_code == 2
    assert _json(result)["error"] == "selector_mismatch"


def test_tolerance_flags_win_over_environment(runner, monkeypatch):
    monkeypatch.setenv("CONWAY_TOLERANCE_REL", "1e-6")
    from_env = _json(runner.invoke(cli, ["check", "--sides", "3,4,5", "--selector", "conway"]))
    # the 3-4-5 triangle has diameter 5
    assert from_env["condition"]["tolerance"] == pytest.approx(5e-6)
    from_flag = _json(
        runner.invoke(cli, ["check", "--sides", "3,4,5", "--selector", "conway", "--tolerance-rel", "1e-8"])
    )
    assert from_flag["condition"]["tolerance"] == pytest.approx(5e-8)


def _markers(svg_text: str) -> int:
    root = etree.fromstring(svg_text.encode("utf-8"))
    return len(root.xpath("//svg:circle[@class='endpoint']", namespaces=NS))


@pytest.mark.parametrize(
    "args, markers",
    [
        (["--sides", "3,4,5", "--selector", "conway"], 6),
        (["--sides", "3,4,4,3,4", "--selector", "corollary3"], 10),
        (["--sides", "2,2,2,2", "--selector", "corollary4", "--d0", "1"], 8),
    ],
)
def test_render_marker_counts_and_determinism(runner, args, markers):
    first = runner.invoke(cli, ["render", *args])
    second = runner.invoke(cli, ["render", *args])
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    assert _markers(first.stdout) == markers


def test_render_to_file_with_overrides(runner, tmp_path):
    out = tmp_path / "figure.svg"
    result = runner.invoke(
        cli, ["render", "--sides", "3,4,5", "--selector", "conway", "--size", "200", "--labels", "off", "--out", str(out)]
    )
    assert result.exit_code == 0
    root = etree.fromstring(out.read_bytes())
    assert float(root.get("width")) == pytest.approx(200.0)
    assert root.xpath("//svg:text", namespaces=NS) == []


def test_render_rejects_unrealizable_pentagon(runner):
    result = runner.invoke(cli, ["render", "--sides", "1,2,3,4,5", "--selector", "corollary3"])
    assert result.exit_code == 2
    assert _json(result)["error"] == "infeasible"


def test_render_selector_parity_mismatch(runner):
    result = runner.invoke(cli, ["render", "--sides", "3,4,4,3,4", "--selector", "theorem3"])
    assert result.exit_code == 2
    assert _json(result)["error"] == "selector_mismatch"


def test_fuzz_is_deterministic(runner):
    args = ["fuzz", "--seed", "7", "--trials", "40", "--odd", "--workers", "2"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    summary = _json(first)
    assert summary["ok"] is True
    assert summary["trials"] == 40
    assert summary["disagreements"] == 0


def test_fuzz_even_polygons(runner):
    result = runner.invoke(cli, ["fuzz", "--seed", "7", "--trials", "20", "--even"])
    assert result.exit_code == 0
    assert set(_json(result)["by_family"]) == {"theorem3"}


def test_fuzz_rejects_zero_trials(runner):
    result = runner.invoke(cli, ["fuzz", "--trials", "0"])
    assert result.exit_code == 2
    assert _json(result)["error"] == "invalid_config"


@pytest.mark.parametrize("content", ["[1, 2, 3]", '"polygon"', "42"])
def test_polygon_file_must_hold_an_object(runner, tmp_path, content):
    polygon_file = tmp_path / "polygon.json"
    polygon_file.write_text(content, encoding="utf-8")
    result = runner.invoke(cli, ["build", "--polygon", str(polygon_file)])
    assert result.exit_code == 2
    error = _json(result)
    assert error["error"] == "invalid_document"
    assert "JSON object" in error["message"]


def test_check_rejects_overflowing_extensions(runner):
    result = runner.invoke(
        cli, ["check", "--vertices", "0,0; 4,0; 0,3", "--selector", "theorem1", "--x-a", "1e308"]
    )
    assert result.exit_code == 2
    assert "Infinity" not in result.stdout
    assert _json(result)["error"] == "degenerate"


def test_check_corollary4_accepts_d0_within_tolerance(runner):
    # d0 and h0 disagree by 1e-10, far below rel * d for the default tolerance
    result = runner.invoke(
        cli, ["check", "--sides", "2,2,2,2", "--h0", "1", "--selector", "corollary4", "--d0", "1.0000000001"]
    )
    assert result.exit_code == 0, result.stdout
    assert _json(result)["passed"] is True


def test_even_condition_is_the_construction_formula(runner):
    # constant offset t + x = 5 on the square is concyclic but is not the even construction (x = 3)
    result = runner.invoke(cli, ["check", "--sides", "2,2,2,2", "--h0", "1", "--extensions", ",".join(["4"] * 8)])
    assert result.exit_code == 1
    report = _json(result)
    assert report["condition_kind"] == "formula"
    assert report["condition"]["passed"] is False
    assert report["concyclic"]["passed"] is True
    assert report["oracle"]["passed"] is True
    assert report["circle"]["radius"] == pytest.approx(math.sqrt(26.0))


def test_odd_condition_is_an_iff(runner):
    report = _json(runner.invoke(cli, ["check", "--sides", "3,4,5", "--selector", "conway"]))
    assert report["condition_kind"] == "iff"


@pytest.mark.slow
def test_fuzz_acceptance_run_is_byte_identical(runner):
    args = ["fuzz", "--seed", "7", "--trials", "500"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0, first.stdout
    assert first.stdout == second.stdout
    summary = _json(first)
    assert summary["trials"] == 500
    assert summary["single_end_failures"] == 500
