import csv
import glob
import logging
from pathlib import Path
from typing import Iterable, Optional

from exceptions.sim_exceptions import FormatException
from schemas.model import RunSample, SectionSample

log = logging.getLogger(__name__)

RUN_LOG_HEADER = ("t", "v", "omega", "alpha", "F_z", "z")
SECTION_HEADER = ("alpha", "distance", "duration", "revolutions")


def _optional(cell: str) -> Optional[float]:
    cell = cell.strip()
    return float(cell) if cell else None


class RunLogRepository:
    """Run-log CSVs: `t,v,omega,alpha,F_z,z` with empty cells for absent values."""

    def read(self, path: Path) -> list[RunSample]:
        path = Path(path)
        samples: list[RunSample] = []
        try:
            with path.open(newline="") as file:
                reader = csv.DictReader(file)
                if tuple(reader.fieldnames or ()) != RUN_LOG_HEADER:
                    raise FormatException(
                        f"Run log {path} header must be {','.join(RUN_LOG_HEADER)}"
                    )
                for row in reader:
                    samples.append(
                        RunSample(
                            t=float(row["t"]),
                            v=float(row["v"]),
                            omega=_optional(row["omega"]),
                            alpha=_optional(row["alpha"]) or 0.0,
                            F_z=_optional(row["F_z"]),
                            z=_optional(row["z"]),
                        )
                    )
        except (OSError, ValueError) as e:
            log.error("Failed read run log %s > %s", path, e)
            raise FormatException(f"Cannot read run log {path}: {e}")

        if any(b.t <= a.t for a, b in zip(samples, samples[1:])):
            raise FormatException(f"Run log {path} timestamps must be strictly increasing")
        if not samples:
            raise FormatException(f"Run log {path} holds no samples")
        return samples

    def read_glob(self, pattern: str) -> list[list[RunSample]]:
        paths = sorted(glob.glob(pattern))
        log.info("Found %d run logs for %s", len(paths), pattern)
        return [self.read(Path(path)) for path in paths]

    def read_sections(self, path: Path) -> list[SectionSample]:
        """Section-traverse CSVs: one row per timed traverse of a marked distance."""
        path = Path(path)
        try:
            with path.open(newline="") as file:
                reader = csv.DictReader(file)
                if tuple(reader.fieldnames or ()) != SECTION_HEADER:
                    raise FormatException(
                        f"Section log {path} header must be {','.join(SECTION_HEADER)}"
                    )
                sections = [
                    SectionSample(**{key: float(row[key]) for key in SECTION_HEADER}) for row in reader
                ]
        except (OSError, ValueError) as e:
            log.error("Failed read section log %s > %s", path, e)
            raise FormatException(f"Cannot read section log {path}: {e}")

        if not sections:
            raise FormatException(f"Section log {path} holds no traverses")
        return sections

    def read_sections_glob(self, pattern: str) -> list[SectionSample]:
        paths = sorted(glob.glob(pattern))
        log.info("Found %d section logs for %s", len(paths), pattern)
        return [section for path in paths for section in self.read_sections(Path(path))]

    def write(self, samples: Iterable[RunSample], path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(RUN_LOG_HEADER)
            for sample in samples:
                writer.writerow(
                    ["" if value is None else repr(float(value)) for value in (
                        sample.t, sample.v, sample.omega, sample.alpha, sample.F_z, sample.z
                    )]
                )
        return path
