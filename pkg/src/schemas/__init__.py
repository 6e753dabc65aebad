__all__ = [
    "ModelParams",
    "SlipModelParams",
    "SinkageModelParams",
    "RunSample",
    "SectionSample",
    "FitResult",
    "WheelGeometry",
    "LimiterParams",
    "FrictionParams",
    "RoverState",
    "ContactParams",
    "ContactState",
    "ContactMode",
    "TracePatternParams",
    "TerrainSpec",
    "Scenario",
    "WorldState",
    "TelemetryRecord",
    "ErrorStats",
    "Config",
]

from schemas.model import ModelParams, SlipModelParams, SinkageModelParams, RunSample, SectionSample, FitResult
from schemas.vehicle import WheelGeometry, LimiterParams, FrictionParams, RoverState
from schemas.contact import ContactParams, ContactState, ContactMode
from schemas.terrain import TracePatternParams, TerrainSpec
from schemas.sim import Scenario, WorldState, TelemetryRecord, ErrorStats
from schemas.config import Config
