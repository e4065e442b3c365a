from __future__ import annotations

import pytest
from pydantic import ValidationError

from conway_circles.api.config import TOLERANCE_ENV, Settings, get_settings, reload_settings


def _write_config(tmp_path, text: str):
    path = tmp_path / "config.yml"
    path.write_text(text, encoding="utf-8")
    return path


def test_repository_config_loads():
    settings = get_settings()
    assert settings.tolerance.rel == pytest.approx(1e-9)
    assert settings.fuzz.bit_generator == "PCG64"
    assert settings.render.significant_digits == 9


def test_missing_config_falls_back_to_defaults(monkeypatch, tmp_path):
    monkeypatch.setenv("CONFIG_PATH", str(tmp_path / "absent.yml"))
    settings = reload_settings()
    assert settings == Settings()


def test_config_interpolates_environment(monkeypatch, tmp_path):
    path = _write_config(tmp_path, "logging:\n  level: ${CONWAY_TEST_LEVEL}\nfuzz:\n  seed: 42\n")
    monkeypatch.setenv("CONFIG_PATH", str(path))
    monkeypatch.setenv("CONWAY_TEST_LEVEL", "DEBUG")
    settings = reload_settings()
    assert settings.logging.level == "DEBUG"
    assert settings.fuzz.seed == 42


def test_tolerance_env_overrides_config(monkeypatch, tmp_path):
    path = _write_config(tmp_path, "tolerance:\n  rel: 1.0e-7\n")
    monkeypatch.setenv("CONFIG_PATH", str(path))
    assert reload_settings().tolerance.rel == pytest.approx(1e-7)
    monkeypatch.setenv(TOLERANCE_ENV, "1e-6")
    tol = reload_settings().tolerance.to_tolerance()
    assert tol.rel == pytest.approx(1e-6)
    assert tol.abs_floor == pytest.approx(1e-12)


@pytest.mark.parametrize(
    "text",
    [
        "fuzz:\n  odd_range: [9, 3]\n",
        "tolerance:\n  rel: 0\n",
        "render:\n  margin: 0.7\n",
    ],
)
def test_invalid_config_is_rejected(monkeypatch, tmp_path, text):
    monkeypatch.setenv("CONFIG_PATH", str(_write_config(tmp_path, text)))
    with pytest.raises(ValidationError):
        reload_settings()
