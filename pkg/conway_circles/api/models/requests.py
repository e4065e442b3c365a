from __future__ import annotations

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Selector(str, Enum):
    CONWAY = "conway"
    THEOREM1 = "theorem1"
    COROLLARY1 = "corollary1"
    THEOREM2 = "theorem2"
    COROLLARY2 = "corollary2"
    COROLLARY3 = "corollary3"
    THEOREM3 = "theorem3"
    COROLLARY4 = "corollary4"


class PolygonDocument(BaseModel):
    # build output carries extra fields (incenter, inradius, ...) and can be fed back in
    model_config = ConfigDict(extra="ignore")

    vertices: Optional[List[Tuple[float, float]]] = None
    sides: Optional[List[float]] = None
    h0: Optional[float] = None
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def _one_source(self) -> "PolygonDocument":
        if (self.vertices is None) == (self.sides is None):
            raise ValueError("exactly one of vertices or sides is required")
        count = len(self.vertices or self.sides or [])
        if count < 3:
            raise ValueError("a polygon needs at least three vertices or sides")
        if self.h0 is not None and (self.sides is None or len(self.sides) % 2):
            raise ValueError("h0 is only allowed with an even number of sides")
        if self.labels is not None and len(self.labels) != count:
            raise ValueError("labels must name every vertex")
        return self

    @property
    def n(self) -> int:
        return len(self.vertices or self.sides or [])


class RenderOptions(BaseModel):
    size: Optional[int] = Field(default=None, ge=64)
    stroke: Optional[float] = Field(default=None, gt=0)
    labels: Optional[bool] = None


class SceneDocument(BaseModel):
    polygon: PolygonDocument
    extensions: Optional[List[float]] = None
    selector: Optional[Selector] = None
    x_a: Optional[float] = None
    d0: Optional[float] = None
    render: RenderOptions = RenderOptions()

    @model_validator(mode="after")
    def _one_spec(self) -> "SceneDocument":
        if (self.extensions is None) == (self.selector is None):
            raise ValueError("exactly one of extensions or selector is required")
        return self
