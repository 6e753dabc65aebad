import logging
import math
from typing import Sequence

import numpy as np

from exceptions.sim_exceptions import FitException
from schemas.model import FitResult, RunSample, SectionSample, SinkageModelParams, SlipModelParams
from services.model import align_encoder, slip_from_run, slip_from_section
from utils.regression import least_squares

log = logging.getLogger(__name__)


class CalibrationService:
    """Recovers regression coefficients from (aggregated or raw) run data."""

    def __init__(self, base: SlipModelParams | None = None) -> None:
        self.base = base or SlipModelParams()

    def fit_slip_flat(self, samples: Sequence[tuple[float, float]]) -> FitResult:
        """Least-squares line s = a_v * v_w + b_v."""
        data = np.asarray(samples, dtype=float).reshape(-1, 2)
        if np.unique(data[:, 0]).size < 2:
            raise FitException("Level-ground fit needs at least two distinct wheel speeds")

        design = np.column_stack([data[:, 0], np.ones(len(data))])
        (a_v, b_v), rms, r2 = least_squares(design, data[:, 1])
        params = self.base.model_copy(update={"a_v": float(a_v), "b_v": float(b_v)})
        log.info("Fitted level-ground slip a_v=%.6g b_v=%.6g rms=%.3g", a_v, b_v, rms)
        return FitResult(slip=params, rms=rms, r2=r2, n_samples=len(data))

    def fit_slip_slope(self, samples: Sequence[tuple[float, float, float]]) -> FitResult:
        """Level-ground line on the alpha = 0 subset, then the slope terms on the residual."""
        data = np.asarray(samples, dtype=float).reshape(-1, 3)
        v_w, alpha, s = data[:, 0], data[:, 1], data[:, 2]
        flat = alpha == 0.0
        sloped = ~flat
        if not flat.any():
            raise FitException("Slope fit needs samples at alpha = 0 for the level-ground stage")
        if np.unique(np.abs(alpha[sloped])).size < 2 or np.unique(v_w[sloped]).size < 2:
            raise FitException(
                "Slope fit needs at least two non-zero slope angles and two wheel speeds"
            )

        flat_fit = self.fit_slip_flat(np.column_stack([v_w[flat], s[flat]]))
        a_v, b_v = flat_fit.slip.a_v, flat_fit.slip.b_v

        a2 = alpha[sloped] ** 2
        residual = s[sloped] - (a_v * v_w[sloped] + b_v)
        design = np.column_stack([v_w[sloped] * a2, a2])
        (a_alpha, b_alpha), _, _ = least_squares(design, residual)

        params = flat_fit.slip.model_copy(
            update={"a_alpha": float(a_alpha), "b_alpha": float(b_alpha)}
        )
        predicted = (params.a_alpha * v_w + params.b_alpha) * alpha**2 + a_v * v_w + b_v
        rms = float(np.sqrt(np.mean((s - predicted) ** 2)))
        ss_tot = float(np.sum((s - s.mean()) ** 2))
        r2 = 1.0 - float(np.sum((s - predicted) ** 2)) / ss_tot if ss_tot > 0.0 else 1.0
        log.info(
            "Fitted slope slip a_alpha=%.6g b_alpha=%.6g rms=%.3g", a_alpha, b_alpha, rms
        )
        return FitResult(slip=params, rms=rms, r2=r2, n_samples=len(data))

    def fit_sinkage(self, samples: Sequence[tuple[float, float, float]], F_ref: float) -> FitResult:
        """Least-squares plane z = c_s * s + c_F * (F_z - F_ref) + c_0 in mm."""
        data = np.asarray(samples, dtype=float).reshape(-1, 3)
        design = np.column_stack([data[:, 0], data[:, 1] - F_ref, np.ones(len(data))])
        (c_s, c_F, c_0), rms, r2 = least_squares(design, data[:, 2])
        try:
            params = SinkageModelParams(c_s=c_s, c_F=c_F, c_0=c_0, F_ref=F_ref)
        except ValueError as e:
            raise FitException(f"Fitted sinkage coefficients violate the sign convention > {e}")
        log.info(
            "Fitted sinkage c_s=%.6g c_F=%.6g c_0=%.6g rms=%.3g", c_s, c_F, c_0, rms
        )
        return FitResult(sinkage=params, rms=rms, r2=r2, n_samples=len(data))

    def slip_samples(
        self, runs: Sequence[Sequence[RunSample]], R_eff: float
    ) -> list[tuple[float, float, float]]:
        """(v_w, alpha, s) triples from raw run logs, with v_w = omega * R_eff."""
        triples = []
        for run in runs:
            aligned = align_encoder(run)
            for sample, (_, s) in zip(aligned, slip_from_run(aligned, R_eff)):
                triples.append((sample.omega * R_eff, sample.alpha, s))
        return triples

    def section_samples(
        self, sections: Sequence[SectionSample], R_eff: float
    ) -> list[tuple[float, float, float]]:
        """(v_w, alpha, s) triples from timed section traverses."""
        triples = []
        for section in sections:
            s = slip_from_section(section.distance, section.duration, section.revolutions, R_eff)
            v_w = 2.0 * math.pi * R_eff * section.revolutions / section.duration
            triples.append((v_w, section.alpha, s))
        return triples

    def sinkage_samples(
        self, runs: Sequence[Sequence[RunSample]], R_eff: float
    ) -> list[tuple[float, float, float]]:
        """(|s|, F_z, z) triples from the run-log rows that carry load and sinkage."""
        triples = []
        for run in runs:
            aligned = align_encoder(run)
            for sample, (_, s) in zip(aligned, slip_from_run(aligned, R_eff)):
                if sample.F_z is None or sample.z is None:
                    continue
                triples.append((min(1.0, abs(s)), sample.F_z, sample.z))
        if not triples:
            raise FitException("Run logs carry no rows with both F_z and z")
        return triples
