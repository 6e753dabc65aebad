from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field

from schemas.contact import ContactParams
from schemas.model import ModelParams
from schemas.sim import AlphaPolicy, CommandSpec, RoverSpec, Scenario
from schemas.terrain import DemChannel, TerrainSpec
from schemas.vehicle import FrictionParams, LimiterParams


class SimSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    dt_hz: Annotated[float, Field(gt=0.0)] = 30.0
    duration_s: Annotated[float, Field(gt=0.0)] = 10.0
    gravity: Annotated[float, Field(gt=0.0)] = 1.62
    settle_s: Annotated[float, Field(ge=0.0)] = 3.0
    alpha_policy: AlphaPolicy = AlphaPolicy.reject


class OutputSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    telemetry: str = "telemetry.csv"
    errors: str = "errors.json"
    dem_channels: list[DemChannel] = []
    threshold_mm: Optional[Annotated[float, Field(gt=0.0)]] = None


class Config(BaseModel):
    """Root of a scenario configuration file; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    sim: SimSection = SimSection()
    rover: RoverSpec = RoverSpec()
    model: ModelParams = ModelParams()
    friction: FrictionParams = FrictionParams()
    limiter: LimiterParams = LimiterParams()
    contact: ContactParams = ContactParams()
    terrain: TerrainSpec = TerrainSpec()
    command: CommandSpec = CommandSpec()
    output: OutputSection = OutputSection()

    def to_scenario(self) -> Scenario:
        return Scenario(
            duration=self.sim.duration_s,
            dt=1.0 / self.sim.dt_hz,
            gravity=self.sim.gravity,
            settle_s=self.sim.settle_s,
            alpha_policy=self.sim.alpha_policy,
            rover=self.rover,
            terrain=self.terrain,
            command=self.command,
            contact=self.contact,
            models=self.model,
            friction=self.friction,
            limiter=self.limiter,
        )
