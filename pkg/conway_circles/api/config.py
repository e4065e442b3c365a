from __future__ import annotations

import logging
import os
import re
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List

import yaml
from pydantic import BaseModel, Field, field_validator

from conway_circles.api.services.geom_core import Tolerance

logger = logging.getLogger(__name__)

TOLERANCE_ENV = "CONWAY_TOLERANCE_REL"


class ToleranceConfig(BaseModel):
    rel: float = Field(default=1e-9, gt=0)
    abs_floor: float = Field(default=1e-12, ge=0)

    def to_tolerance(self) -> Tolerance:
        return Tolerance(rel=self.rel, abs_floor=self.abs_floor)


class SolverConfig(BaseModel):
    # Bisection stops once the bracket is below xtol + 4 eps * r.
    xtol: float = Field(default=1e-14, gt=0)
    max_iter: int = Field(default=200, ge=10)
    closure_tol: float = Field(default=1e-12, gt=0)


class FuzzConfigModel(BaseModel):
    seed: int = Field(default=7, ge=0)
    trials: int = Field(default=500, ge=1)
    # Pinned so reports are reproducible across platforms.
    bit_generator: str = Field(default="PCG64")
    workers: int = Field(default=4, ge=1)
    odd_range: List[int] = Field(default_factory=lambda: [3, 9])
    even_range: List[int] = Field(default_factory=lambda: [4, 8])
    length_range: List[float] = Field(default_factory=lambda: [0.5, 5.0])
    perturbation: float = Field(default=1e-2, ge=0)

    @field_validator("odd_range", "even_range", "length_range")
    @classmethod
    def _check_range(cls, value: List[float]) -> List[float]:
        if len(value) != 2 or value[0] > value[1] or value[0] <= 0:
            raise ValueError("ranges must be [lo, hi] with 0 < lo <= hi")
        return value


class RenderConfig(BaseModel):
    size: int = Field(default=640, ge=64)
    stroke: float = Field(default=1.5, gt=0)
    marker_radius: float = Field(default=3.0, gt=0)
    labels: bool = Field(default=True)
    margin: float = Field(default=0.05, ge=0, lt=0.5)
    significant_digits: int = Field(default=9, ge=3, le=17)
    colors: Dict[str, str] = Field(
        default_factory=lambda: {
            "polygon": "#1f2933",
            "extension": "#7b8794",
            "incircle": "#2f80ed",
            "conway": "#d64545",
            "endpoint": "#d64545",
            "label": "#1f2933",
        }
    )


class LoggingConfig(BaseModel):
    level: str = Field(default="INFO")


class Settings(BaseModel):
    tolerance: ToleranceConfig = ToleranceConfig()
    solver: SolverConfig = SolverConfig()
    fuzz: FuzzConfigModel = FuzzConfigModel()
    render: RenderConfig = RenderConfig()
    logging: LoggingConfig = LoggingConfig()


_ENV_PLACEHOLDER = re.compile(r"\$\{([^}]+)\}")


def _expand_env(node: Any) -> Any:
    """Replace ${VAR} in every string of a parsed YAML tree; unknown variables stay as written."""
    if isinstance(node, dict):
        return {key: _expand_env(value) for key, value in node.items()}
    if isinstance(node, list):
        return [_expand_env(value) for value in node]
    if isinstance(node, str):
        return _ENV_PLACEHOLDER.sub(lambda m: os.getenv(m.group(1), m.group(0)), node)
    return node


def _load_yaml_config(path: Path) -> Dict[str, Any]:
    if not path.is_file():
        return {}
    document = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    return _expand_env(document)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    config_path = Path(os.getenv("CONFIG_PATH", Path.cwd() / "config.yml"))
    raw = _load_yaml_config(config_path)
    env_rel = os.getenv(TOLERANCE_ENV)
    if env_rel:
        raw.setdefault("tolerance", {})["rel"] = float(env_rel)
    settings = Settings.model_validate(raw)
    logger.debug(
        "Settings loaded from %s: tolerance rel=%g abs_floor=%g bit_generator=%s",
        config_path,
        settings.tolerance.rel,
        settings.tolerance.abs_floor,
        settings.fuzz.bit_generator,
    )
    return settings


def reload_settings() -> Settings:
    """Invalidate cache and reload settings, useful after editing config.yml."""
    get_settings.cache_clear()  # type: ignore[attr-defined]
    return get_settings()
