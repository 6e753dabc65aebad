import json

import numpy as np
import pytest
import rasterio

from core.config import settings
from exceptions.sim_exceptions import ConfigException, FormatException
from repositories.config import ConfigRepository
from repositories.dem import DemRepository
from repositories.params import ParamsRepository
from repositories.run_log import RunLogRepository
from repositories.telemetry import TelemetryRepository
from schemas.model import ModelParams, RunSample, SectionSample, SinkageModelParams
from schemas.sim import ErrorStats, SweepRow, TelemetryRecord
from schemas.terrain import DemChannel, TerrainKind
from services.terrain import TerrainGrid

TELEMETRY_HEADER_LINE = (
    "t,v_cmd,v,s,alpha,z_fl,z_fr,z_rl,z_rr,Fz_fl,Fz_fr,Fz_rl,Fz_rr,"
    "k_fl,k_fr,k_rl,k_rr,x,y,theta_cmd,theta_phys"
)


def test_params_dotted_round_trip(tmp_path):
    repo = ParamsRepository()
    params = ModelParams(sinkage=SinkageModelParams(c_s=-30.0))
    path = repo.save(params, tmp_path / "params.json")
    data = json.loads(path.read_text())
    assert data["slip.a_v"] == 0.0265
    assert data["sinkage.c_s"] == -30.0
    assert repo.load(path) == params


def test_params_accepts_nested_form():
    params = ParamsRepository.from_dotted({"slip": {"a_v": 0.03}, "sinkage.c_0": -2.0})
    assert params.slip.a_v == 0.03
    assert params.sinkage.c_0 == -2.0


@pytest.mark.parametrize("data", [{"a_v": 0.03}, {"slip.unknown": 1.0}, {"sinkage.c_s": 5.0}])
def test_params_rejects_bad_keys(data):
    with pytest.raises(ConfigException):
        ParamsRepository.from_dotted(data)


def test_run_log_round_trip(tmp_path):
    repo = RunLogRepository()
    samples = [
        RunSample(t=0.0, v=0.1, omega=2.0, alpha=5.0),
        RunSample(t=0.05, v=0.2),
        RunSample(t=0.1, v=0.3, omega=4.0, F_z=8.72, z=-5.5),
    ]
    path = repo.write(samples, tmp_path / "run.csv")
    assert path.read_text().splitlines()[0] == "t,v,omega,alpha,F_z,z"
    assert repo.read(path) == samples


def test_run_log_rejects_wrong_header(tmp_path):
    path = tmp_path / "run.csv"
    path.write_text("time,v,omega,alpha,F_z,z\n0,0.1,1,0,,\n")
    with pytest.raises(FormatException):
        RunLogRepository().read(path)


def test_run_log_rejects_unordered_time(tmp_path):
    path = tmp_path / "run.csv"
    path.write_text("t,v,omega,alpha,F_z,z\n0.1,0.1,1,0,,\n0.1,0.2,1,0,,\n")
    with pytest.raises(FormatException):
        RunLogRepository().read(path)


def test_run_log_glob_is_sorted(tmp_path):
    repo = RunLogRepository()
    for name, v in (("b.csv", 0.2), ("a.csv", 0.1)):
        repo.write([RunSample(t=0.0, v=v, omega=1.0)], tmp_path / name)
    runs = repo.read_glob(str(tmp_path / "*.csv"))
    assert [run[0].v for run in runs] == [0.1, 0.2]


def test_section_logs_are_pooled(tmp_path):
    (tmp_path / "a.csv").write_text("alpha,distance,duration,revolutions\n0,2.0,4.0,3.5\n10,2.0,8.0,4.0\n")
    (tmp_path / "b.csv").write_text("alpha,distance,duration,revolutions\n-5,1.0,2.0,1.8\n")
    sections = RunLogRepository().read_sections_glob(str(tmp_path / "*.csv"))
    assert sections == [
        SectionSample(alpha=0.0, distance=2.0, duration=4.0, revolutions=3.5),
        SectionSample(alpha=10.0, distance=2.0, duration=8.0, revolutions=4.0),
        SectionSample(alpha=-5.0, distance=1.0, duration=2.0, revolutions=1.8),
    ]


@pytest.mark.parametrize(
    "text", ["t,v,omega,alpha,F_z,z\n0,0.1,1,0,,\n", "alpha,distance,duration,revolutions\n", "alpha,distance,duration,revolutions\n0,x,1,1\n"]
)
def test_section_log_rejects_bad_files(tmp_path, text):
    path = tmp_path / "sections.csv"
    path.write_text(text)
    with pytest.raises(FormatException):
        RunLogRepository().read_sections(path)


def test_telemetry_format(tmp_path):
    record = TelemetryRecord(
        t=1.0 / 30.0, v_cmd=1.17, v=0.1158666, s=0.9009686, alpha=0.0,
        z=(-33.3, -33.3, -33.3, -33.3), F_z=(8.76, 8.76, 8.76, 8.76), k=(200.0,) * 4,
        x=0.0038622, y=0.0, theta_cmd=0.39, theta_phys=0.0386222,
    )
    path = TelemetryRepository().write_telemetry([record], tmp_path / "telemetry.csv")
    raw = path.read_bytes()
    assert b"\r" not in raw
    header, row = raw.decode().splitlines()
    assert header == TELEMETRY_HEADER_LINE
    assert row.startswith("0.033333,1.170000,0.115867,0.900969,0.000000,-33.300000")
    assert all(len(cell.split(".")[1]) == 6 for cell in row.split(","))


def test_telemetry_never_prints_negative_zero():
    record = TelemetryRecord(
        t=0.0, v_cmd=0.0, v=-0.0, s=-1e-9, alpha=-0.0,
        z=(-0.0, -4e-7, 1.5355, 0.0), F_z=(3.72,) * 4, k=(1.0,) * 4,
        x=0.0, y=-0.0, theta_cmd=0.0, theta_phys=-0.0,
    )
    row = TelemetryRepository().render_telemetry([record]).splitlines()[1]
    assert "-0.000000" not in row
    assert row.startswith("0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,1.535500,")


def test_relative_sinkage_format(tmp_path):
    path = TelemetryRepository().write_relative_sinkage([(5.5, 0.0), (5.6, -1.25)], tmp_path / "rel.csv")
    assert path.read_text() == "t,z_rel\n5.500000,0.000000\n5.600000,-1.250000\n"


def test_sweep_and_errors_format(tmp_path):
    repo = TelemetryRepository()
    text = repo.render_sweep([SweepRow(v_w=0.47, alpha=0.0, s_steady=0.038055, z_steady_mm=-4.42)])
    assert text == "v_w,alpha,s_steady,z_steady_mm\n0.470000,0.000000,0.038055,-4.420000\n"
    path = repo.write_errors(ErrorStats(slip_mae=0.01, slip_max=0.02, sinkage_mae=0.1, n_samples=210), tmp_path / "e.json")
    assert json.loads(path.read_text())["n_samples"] == 210


def test_dem_small_flat_grid(tmp_path):
    grid = TerrainGrid.flat(2, 2, 0.5)
    path = DemRepository().write(grid, tmp_path / "flat.asc")
    lines = path.read_text().splitlines()
    keys = [line.split()[0].lower() for line in lines[:6]]
    assert keys == ["ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"]
    assert float(lines[5].split()[1]) == -9999
    assert [len(cell.split(".")[1]) for cell in lines[-1].split()] == [6, 6]
    with rasterio.open(path) as src:
        assert (src.width, src.height) == (2, 2)
        assert src.nodata == -9999
        assert not src.read(1).any()


def test_dem_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    grid = TerrainGrid(rng.uniform(-0.5, 0.5, (7, 4)), 0.025, origin=(-2.0, -1.0))
    grid.d[:] = -rng.uniform(0.0, 0.02, grid.d.shape)
    grid.w[:] = rng.uniform(-0.002, 0.002, grid.w.shape)
    repo = DemRepository()
    loaded = repo.read(repo.write(grid, tmp_path / "dem.asc", DemChannel.rendered))
    assert loaded.base.shape == (7, 4)
    assert np.allclose(loaded.base, grid.rendered, atol=1e-6)
    assert loaded.resolution == pytest.approx(0.025)
    assert loaded.origin == pytest.approx((-2.0, -1.0))
    assert loaded.height_at(-1.95, -0.95) == pytest.approx(grid.height_at(-1.95, -0.95), abs=1e-6)


def test_dem_northern_row_first(tmp_path):
    grid = TerrainGrid.flat(3, 2, 1.0)
    grid.base[:, 1] = 5.0
    path = DemRepository().write(grid, tmp_path / "north.asc")
    with rasterio.open(path) as src:
        rows = src.read(1)
    assert rows[0].tolist() == [5.0, 5.0, 5.0]
    assert rows[1].tolist() == [0.0, 0.0, 0.0]


def test_dem_mask(tmp_path):
    grid = TerrainGrid.flat(4, 3, 0.1)
    grid.d[1, 2] = -0.015
    grid.d[2, 0] = -0.005
    repo = DemRepository()
    path = repo.write_mask(grid, tmp_path / "mask.asc", threshold_mm=12.0)
    mask = repo.read(path).base
    assert mask[1, 2] == 1.0
    assert mask.sum() == 1.0


def test_dem_fills_nodata(tmp_path):
    path = tmp_path / "holes.asc"
    path.write_text(
        "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n"
        "1.0 -9999\n2.0 3.0\n"
    )
    grid = DemRepository().read(path)
    assert grid.base.min() == 1.0
    assert grid.origin == pytest.approx((0.5, 0.5))


def test_dem_reads_cell_center_header(tmp_path):
    path = tmp_path / "centers.asc"
    path.write_text("ncols 2\nnrows 2\nxllcenter 10\nyllcenter 20\ncellsize 0.5\n1.0 2.0\n3.0 4.0\n")
    grid = DemRepository().read(path)
    assert grid.origin == pytest.approx((10.0, 20.0))
    assert grid.base[0, 0] == 3.0
    assert grid.base[1, 1] == 2.0


def test_dem_rejects_malformed_file(tmp_path):
    path = tmp_path / "bad.asc"
    path.write_text("this is not a grid\n")
    with pytest.raises(FormatException):
        DemRepository().read(path)


def test_config_round_trip(tmp_path):
    repo = ConfigRepository()
    config = repo.load(settings.paths.configs_dir / "turning_deformation.json")
    reloaded = repo.load(repo.save(config, tmp_path / "copy.json"))
    assert reloaded == config
    assert reloaded.to_scenario() == config.to_scenario()


@pytest.mark.parametrize(
    "data, key",
    [
        ({"sim": {"dt_hz": 0}}, "sim.dt_hz"),
        ({"sim": {"dt": 30}}, "sim.dt"),
        ({"rover": {"mass": -1.0}}, "rover.mass"),
        ({"friction": {"mu_s": 0.5, "mu_d": 0.8}}, "friction"),
    ],
)
def test_config_errors_name_the_key(data, key):
    with pytest.raises(ConfigException, match=f"'{key}'"):
        ConfigRepository().parse(data)


def test_config_missing_file(tmp_path):
    with pytest.raises(ConfigException):
        ConfigRepository().load(tmp_path / "missing.json")


def test_config_resolves_heightmap_relative_to_file(write_config):
    path = write_config({"terrain": {"kind": "heightmap", "heightmap": "dem.asc"}})
    config = ConfigRepository().load(path)
    assert config.terrain.kind is TerrainKind.heightmap
    assert config.terrain.heightmap == path.parent / "dem.asc"


def test_bundled_configs_are_valid():
    paths = sorted(settings.paths.configs_dir.glob("*.json"))
    assert {path.name for path in paths} >= {
        "flat_1p17.json", "slope_0p47.json", "skid_stop.json", "turning_deformation.json"
    }
    for path in paths:
        ConfigRepository().load(path).to_scenario()
