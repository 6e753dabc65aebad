import json
import logging
from pathlib import Path
from typing import Iterable

from schemas.sim import ErrorStats, SweepRow, TelemetryRecord
from schemas.vehicle import WHEEL_NAMES

log = logging.getLogger(__name__)

TELEMETRY_HEADER = (
    ["t", "v_cmd", "v", "s", "alpha"]
    + [f"z_{name}" for name in WHEEL_NAMES]
    + [f"Fz_{name}" for name in WHEEL_NAMES]
    + [f"k_{name}" for name in WHEEL_NAMES]
    + ["x", "y", "theta_cmd", "theta_phys"]
)
SWEEP_HEADER = ["v_w", "alpha", "s_steady", "z_steady_mm"]
RELATIVE_SINKAGE_HEADER = ["t", "z_rel"]


def _fmt(value: float) -> str:
    return f"{round(value, 6) + 0.0:.6f}"


class TelemetryRepository:
    """CSV and JSON writers for simulation outputs (LF line endings, 6 decimals)."""

    @staticmethod
    def telemetry_row(record: TelemetryRecord) -> list[float]:
        return [
            record.t, record.v_cmd, record.v, record.s, record.alpha,
            *record.z, *record.F_z, *record.k,
            record.x, record.y, record.theta_cmd, record.theta_phys,
        ]

    def render_telemetry(self, records: Iterable[TelemetryRecord]) -> str:
        lines = [",".join(TELEMETRY_HEADER)]
        lines.extend(",".join(map(_fmt, self.telemetry_row(record))) for record in records)
        return "\n".join(lines) + "\n"

    def write_telemetry(self, records: Iterable[TelemetryRecord], path: Path) -> Path:
        return self._write(path, self.render_telemetry(records))

    def render_sweep(self, rows: Iterable[SweepRow]) -> str:
        lines = [",".join(SWEEP_HEADER)]
        lines.extend(
            ",".join(_fmt(value) for value in (row.v_w, row.alpha, row.s_steady, row.z_steady_mm))
            for row in rows
        )
        return "\n".join(lines) + "\n"

    def write_sweep(self, rows: Iterable[SweepRow], path: Path) -> Path:
        return self._write(path, self.render_sweep(rows))

    def write_relative_sinkage(self, rows: Iterable[tuple[float, float]], path: Path) -> Path:
        lines = [",".join(RELATIVE_SINKAGE_HEADER)]
        lines.extend(f"{_fmt(t)},{_fmt(z_rel)}" for t, z_rel in rows)
        return self._write(path, "\n".join(lines) + "\n")

    def write_errors(self, stats: ErrorStats, path: Path) -> Path:
        return self._write(path, json.dumps(stats.model_dump(), indent=2) + "\n")

    def _write(self, path: Path, text: str) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", newline="\n") as file:
                file.write(text)
        except OSError as e:
            log.error("Failed write %s > %s", path, e)
            raise
        log.info("Wrote %s", path)
        return path
