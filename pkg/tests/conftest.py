import json
from pathlib import Path
from typing import Callable

import pytest

from repositories.run_log import RunLogRepository
from schemas.contact import ContactParams
from schemas.model import RunSample, SinkageModelParams, SlipModelParams
from schemas.sim import CommandSpec, RoverSpec, Scenario, Waypoint
from schemas.terrain import TerrainKind, TerrainSpec
from schemas.vehicle import FrictionParams, LimiterParams, WheelGeometry


@pytest.fixture
def slip_params() -> SlipModelParams:
    return SlipModelParams()


@pytest.fixture
def sinkage_params() -> SinkageModelParams:
    return SinkageModelParams()


@pytest.fixture
def geom() -> WheelGeometry:
    return WheelGeometry()


@pytest.fixture
def contact_params() -> ContactParams:
    return ContactParams()


@pytest.fixture
def friction() -> FrictionParams:
    return FrictionParams()


@pytest.fixture
def limiter() -> LimiterParams:
    return LimiterParams()


@pytest.fixture
def make_scenario() -> Callable[..., Scenario]:
    def _make(
        v_w: float = 0.0,
        alpha: float = 0.0,
        duration: float = 10.0,
        dt: float = 1.0 / 30.0,
        waypoints: list[tuple[float, float]] | None = None,
        terrain: dict | None = None,
        rover: dict | None = None,
        command: dict | None = None,
        **fields,
    ) -> Scenario:
        points = waypoints or [(0.0, v_w)]
        terrain_fields = {"kind": TerrainKind.slope if alpha else TerrainKind.flat, "slope_deg": alpha}
        terrain_fields.update(terrain or {})
        return Scenario(
            duration=duration,
            dt=dt,
            rover=RoverSpec(**(rover or {})),
            terrain=TerrainSpec(**terrain_fields),
            command=CommandSpec(
                waypoints=[Waypoint(t=t, v_w=v) for t, v in points], **(command or {})
            ),
            **fields,
        )

    return _make


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[dict, str], Path]:
    def _write(data: dict, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return _write


@pytest.fixture
def write_run_logs(tmp_path: Path) -> Callable[..., str]:
    """Write one synthetic run log per entry and return a glob matching them."""

    def _write(runs: list[list[RunSample]], folder: str = "runs") -> str:
        directory = tmp_path / folder
        repo = RunLogRepository()
        for n, samples in enumerate(runs):
            repo.write(samples, directory / f"run_{n:02d}.csv")
        return str(directory / "run_*.csv")

    return _write
