import itertools
import logging
from pathlib import Path
from typing import Optional, Sequence

from core.config import SweepSettings
from exceptions.sim_exceptions import AnalysisException, ConfigException, SimException
from repositories.config import ConfigRepository
from repositories.dem import DemRepository
from repositories.params import ParamsRepository
from repositories.run_log import RunLogRepository
from repositories.telemetry import TelemetryRepository
from schemas.config import Config
from schemas.model import ModelParams
from schemas.terrain import DemChannel
from services.calibration import CalibrationService
from services.model import ALPHA_WINDOW_DEG
from services.sim import Simulator, error_report, relative_sinkage, sweep

log = logging.getLogger(__name__)

FIT_KINDS = ("slip_flat", "slip_slope", "sinkage")


def _load_config(config_path: Path, model_path: Optional[Path] = None) -> Config:
    config = ConfigRepository().load(config_path)
    if model_path is not None:
        config = config.model_copy(update={"model": ParamsRepository().load(model_path)})
    return config


def cmd_run(
    config_path: Path,
    out_dir: Path,
    model_path: Optional[Path] = None,
    relative_from: Optional[float] = None,
) -> int:
    """Run one scenario and write telemetry, steady-state errors and requested DEMs."""
    config = _load_config(config_path, model_path)
    scenario = config.to_scenario()
    out_dir = Path(out_dir)
    telemetry_repo = TelemetryRepository()
    dem_repo = DemRepository()

    try:
        simulator = Simulator(scenario)
        telemetry = simulator.run()
    except SimException as sim_exception:
        raise sim_exception
    except Exception as e:
        log.error("Failed run scenario > %s", e)
        raise SimException(f"Simulation failed: {e}")

    telemetry_repo.write_telemetry(telemetry, out_dir / config.output.telemetry)
    try:
        stats = error_report(telemetry, scenario.models, scenario.settle_s)
        telemetry_repo.write_errors(stats, out_dir / config.output.errors)
    except AnalysisException as e:
        log.warning("Skipping error report > %s", e)
    if relative_from is not None:
        telemetry_repo.write_relative_sinkage(
            relative_sinkage(telemetry, relative_from), out_dir / "relative_sinkage.csv"
        )

    for channel in config.output.dem_channels:
        dem_repo.write(simulator.grid, out_dir / f"dem_{channel.value}.asc", channel)
    if config.output.threshold_mm is not None:
        dem_repo.write_mask(simulator.grid, out_dir / "dem_mask.asc", config.output.threshold_mm)
    return 0


def cmd_fit(
    data_glob: str,
    kind: str,
    out_path: Path,
    r_eff: float = 0.1,
    f_ref: float = 8.72,
    base_path: Optional[Path] = None,
    sections: bool = False,
) -> int:
    """Fit one regression from run logs (or section traverses) and write the full parameter file."""
    if kind not in FIT_KINDS:
        raise ConfigException(f"Unknown fit kind '{kind}', expected one of {', '.join(FIT_KINDS)}")
    if r_eff <= 0.0:
        raise ConfigException("--r-eff must be positive")
    if sections and kind == "sinkage":
        raise ConfigException("Section traverses carry no sinkage, use run logs for the sinkage fit")

    run_log_repo = RunLogRepository()
    runs = run_log_repo.read_sections_glob(data_glob) if sections else run_log_repo.read_glob(data_glob)
    if not runs:
        raise ConfigException(f"No run logs match '{data_glob}'")

    params_repo = ParamsRepository()
    params = params_repo.load(base_path) if base_path is not None else ModelParams()
    calibration = CalibrationService(base=params.slip)

    if kind == "sinkage":
        result = calibration.fit_sinkage(calibration.sinkage_samples(runs, r_eff), f_ref)
        params = params.model_copy(update={"sinkage": result.sinkage})
        coefficients = result.sinkage.model_dump()
    else:
        if sections:
            triples = calibration.section_samples(runs, r_eff)
        else:
            triples = calibration.slip_samples(runs, r_eff)
        if kind == "slip_flat":
            pairs = [(v_w, s) for v_w, alpha, s in triples if alpha == 0.0]
            result = calibration.fit_slip_flat(pairs)
        else:
            result = calibration.fit_slip_slope(triples)
        params = params.model_copy(update={"slip": result.slip})
        coefficients = result.slip.model_dump()

    for name, value in coefficients.items():
        log.info("%s = %.6g", name, value)
    log.info("residual RMS = %.6g, R2 = %.6f over %d samples", result.rms, result.r2, result.n_samples)
    params_repo.save(params, out_path)
    return 0


def cmd_sweep(
    config_path: Path,
    v_list: Sequence[float],
    alpha_list: Sequence[float],
    out_csv: Path,
    model_path: Optional[Path] = None,
) -> int:
    """Steady-state slip map over the product of wheel speeds and slopes."""
    if not v_list or not alpha_list:
        raise ConfigException("--v-list and --alpha-list must both be non-empty")
    for v_w in v_list:
        if v_w < 0.0:
            raise ConfigException(f"--v-list value {v_w} must be non-negative")
    for alpha in alpha_list:
        if abs(alpha) > ALPHA_WINDOW_DEG:
            raise ConfigException(
                f"--alpha-list value {alpha} outside +/-{ALPHA_WINDOW_DEG} deg"
            )

    template = _load_config(config_path, model_path).to_scenario()
    threads = SweepSettings().threads
    rows = sweep(itertools.product(v_list, alpha_list), template, threads=threads)
    TelemetryRepository().write_sweep(rows, out_csv)
    return 0


def cmd_export_dem(
    config_path: Path,
    channel: DemChannel,
    out_asc: Path,
    threshold_mm: Optional[float] = None,
) -> int:
    """Run a deforming scenario, then export one grid channel and an optional depth mask."""
    config = _load_config(config_path)
    if not config.terrain.deformation_enabled:
        raise ConfigException("Invalid config key 'terrain.deformation_enabled': must be true for DEM export")
    if threshold_mm is not None and threshold_mm <= 0.0:
        raise ConfigException("--threshold-mm must be positive")

    try:
        simulator = Simulator(config.to_scenario())
        simulator.run()
    except SimException as sim_exception:
        raise sim_exception
    except Exception as e:
        log.error("Failed export DEM run > %s", e)
        raise SimException(f"Simulation failed: {e}")

    out_asc = Path(out_asc)
    dem_repo = DemRepository()
    dem_repo.write(simulator.grid, out_asc, channel)
    if threshold_mm is not None:
        dem_repo.write_mask(simulator.grid, out_asc.with_name(f"{out_asc.stem}_mask.asc"), threshold_mm)
    return 0
