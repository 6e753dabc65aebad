import math
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


Quad = tuple[float, float, float, float]

WHEEL_NAMES = ("fl", "fr", "rl", "rr")


class WheelGeometry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    r: Annotated[float, Field(gt=0.0)] = 0.09
    h: Annotated[float, Field(ge=0.0)] = 0.01
    n_grousers: Annotated[int, Field(ge=1)] = 18
    width: Annotated[float, Field(gt=0.0)] = 0.12

    @property
    def R(self) -> float:
        """Effective radius including grouser height."""
        return self.r + self.h


class Breakpoint(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    v_upper: Optional[float] = None
    a_max: Annotated[float, Field(gt=0.0)]

    @property
    def upper(self) -> float:
        return math.inf if self.v_upper is None else self.v_upper


class LimiterParams(BaseModel):
    """Piecewise-constant acceleration ceiling; the last breakpoint is open-ended."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    breakpoints: list[Breakpoint] = [
        Breakpoint(v_upper=0.75, a_max=3.476),
        Breakpoint(v_upper=1.02, a_max=0.612),
        Breakpoint(v_upper=None, a_max=0.114),
    ]

    @field_validator("breakpoints")
    @classmethod
    def _check_breakpoints(cls, value: list[Breakpoint]) -> list[Breakpoint]:
        if not value:
            raise ValueError("at least one breakpoint is required")
        if value[-1].v_upper is not None:
            raise ValueError("last breakpoint must be open-ended (v_upper = null)")
        uppers = [bp.v_upper for bp in value[:-1]]
        if any(u is None for u in uppers):
            raise ValueError("only the last breakpoint may be open-ended")
        if any(b <= a for a, b in zip(uppers, uppers[1:])):
            raise ValueError("v_upper must be strictly increasing")
        return value


class FrictionParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    mu_s: Annotated[float, Field(gt=0.0)] = 1.0
    mu_d: Annotated[float, Field(gt=0.0)] = 0.8

    @model_validator(mode="after")
    def _static_not_below_dynamic(self) -> "FrictionParams":
        if self.mu_s < self.mu_d:
            raise ValueError("mu_s must be >= mu_d")
        return self


class RoverState(BaseModel):
    """Longitudinal rover state; wheel tuples are ordered fl, fr, rl, rr."""

    model_config = ConfigDict(frozen=True)

    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0
    v: Annotated[float, Field(ge=0.0)] = 0.0
    theta_cmd: Quad = (0.0, 0.0, 0.0, 0.0)
    theta_phys: Quad = (0.0, 0.0, 0.0, 0.0)
    F_z: Quad = (0.0, 0.0, 0.0, 0.0)
    z: Quad = (0.0, 0.0, 0.0, 0.0)
