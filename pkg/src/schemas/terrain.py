from enum import Enum
from pathlib import Path
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TerrainKind(Enum):
    flat: str = "flat"
    slope: str = "slope"
    heightmap: str = "heightmap"


class DemChannel(Enum):
    base: str = "base"
    depth: str = "depth"
    trace: str = "trace"
    rendered: str = "rendered"


class TracePatternParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    A0: Annotated[float, Field(ge=0.0)] = 0.002
    s_clamp: Annotated[float, Field(gt=0.0, le=1.0)] = 0.8
    lambda_scale: Annotated[float, Field(gt=0.0)] = 1.0


class RockSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    x: float
    y: float
    radius: Annotated[float, Field(gt=0.0)]
    stiffness: Annotated[float, Field(gt=0.0)] = 1.0e9


class TerrainSpec(BaseModel):
    """Terrain source plus the deformation settings applied on top of it.

    For `flat` and `slope` the grid spans `length` x `width` meters with its
    first cell center at `origin`; a `heightmap` brings its own extent.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: TerrainKind = TerrainKind.flat
    slope_deg: Annotated[float, Field(ge=-60.0, le=60.0)] = 0.0
    heightmap: Optional[Path] = None
    length: Annotated[float, Field(gt=0.0)] = 30.0
    width: Annotated[float, Field(gt=0.0)] = 4.0
    origin: tuple[float, float] = (-2.0, -2.0)
    resolution: Annotated[float, Field(gt=0.0)] = 0.025
    deformation_enabled: bool = False
    trace: TracePatternParams = TracePatternParams()
    rocks: list[RockSpec] = []

    @model_validator(mode="after")
    def _heightmap_needs_path(self) -> "TerrainSpec":
        if self.kind is TerrainKind.heightmap and self.heightmap is None:
            raise ValueError("heightmap terrain requires a heightmap path")
        return self
