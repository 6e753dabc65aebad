from enum import Enum
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from schemas.contact import ContactParams, ContactState
from schemas.model import ModelParams
from schemas.terrain import TerrainSpec
from schemas.vehicle import FrictionParams, LimiterParams, Quad, RoverState, WheelGeometry


class AlphaPolicy(Enum):
    reject: str = "reject"
    clamp: str = "clamp"


class PathKind(Enum):
    straight: str = "straight"
    arc: str = "arc"


class RoverSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    mass: Annotated[float, Field(gt=0.0)] = 21.63
    wheel: WheelGeometry = WheelGeometry()
    wheelbase: Annotated[float, Field(gt=0.0)] = 0.55
    track: Annotated[float, Field(gt=0.0)] = 0.45
    h_cg: Annotated[float, Field(ge=0.0)] = 0.2
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0
    load_override: Optional[tuple[Optional[float], Optional[float], Optional[float], Optional[float]]] = None
    wheel_mass: Optional[Quad] = None

    @field_validator("wheel_mass")
    @classmethod
    def _positive_masses(cls, value: Optional[Quad]) -> Optional[Quad]:
        if value is not None and any(m <= 0.0 for m in value):
            raise ValueError("wheel masses must be positive")
        return value

    @field_validator("load_override")
    @classmethod
    def _nonnegative_loads(cls, value):
        if value is not None and any(f is not None and f < 0.0 for f in value):
            raise ValueError("load overrides must be non-negative")
        return value

    def contact_mass(self, wheel: int) -> float:
        if self.wheel_mass is not None:
            return self.wheel_mass[wheel]
        return self.mass / 4.0


class Waypoint(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    t: Annotated[float, Field(ge=0.0)]
    v_w: Annotated[float, Field(ge=0.0)]


class CommandSpec(BaseModel):
    """Step-hold wheel speed profile and the prescribed path shape."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    waypoints: list[Waypoint] = [Waypoint(t=0.0, v_w=0.0)]
    path: PathKind = PathKind.straight
    arc_radius: Optional[float] = None
    outer_load_boost: Annotated[float, Field(ge=0.0, lt=1.0)] = 0.25

    @field_validator("waypoints")
    @classmethod
    def _check_waypoints(cls, value: list[Waypoint]) -> list[Waypoint]:
        if not value:
            raise ValueError("at least one waypoint is required")
        if value[0].t != 0.0:
            raise ValueError("first waypoint must be at t = 0")
        if any(b.t < a.t for a, b in zip(value, value[1:])):
            raise ValueError("waypoint times must be non-decreasing")
        return value

    @model_validator(mode="after")
    def _arc_needs_radius(self) -> "CommandSpec":
        if self.path is PathKind.arc and (self.arc_radius is None or self.arc_radius == 0.0):
            raise ValueError("arc path requires a non-zero arc_radius")
        return self

    def v_w_at(self, t: float) -> float:
        v_w = self.waypoints[0].v_w
        for waypoint in self.waypoints:
            if waypoint.t > t:
                break
            v_w = waypoint.v_w
        return v_w


class Scenario(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    duration: Annotated[float, Field(gt=0.0)] = 10.0
    dt: Annotated[float, Field(gt=0.0)] = 1.0 / 30.0
    gravity: Annotated[float, Field(gt=0.0)] = 1.62
    settle_s: Annotated[float, Field(ge=0.0)] = 3.0
    alpha_policy: AlphaPolicy = AlphaPolicy.reject
    rover: RoverSpec = RoverSpec()
    terrain: TerrainSpec = TerrainSpec()
    command: CommandSpec = CommandSpec()
    contact: ContactParams = ContactParams()
    models: ModelParams = ModelParams()
    friction: FrictionParams = FrictionParams()
    limiter: LimiterParams = LimiterParams()


class WorldState(BaseModel):
    model_config = ConfigDict(frozen=True)

    step: int = 0
    rover: RoverState = RoverState()
    contacts: tuple[ContactState, ContactState, ContactState, ContactState] = (
        ContactState(), ContactState(), ContactState(), ContactState()
    )
    wheel_distance: Quad = (0.0, 0.0, 0.0, 0.0)


class TelemetryRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    v_cmd: float
    v: float
    s: float
    alpha: float
    z: Quad
    F_z: Quad
    k: Quad
    x: float
    y: float
    theta_cmd: float
    theta_phys: float


class ErrorStats(BaseModel):
    """Steady-state deviations: slip in percentage points, sinkage in mm."""

    slip_mae: float
    slip_max: float
    sinkage_mae: float
    n_samples: int


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    v_w: float
    alpha: float
    s_steady: float
    z_steady_mm: float
