import logging
import math
from typing import Sequence

import numpy as np

from exceptions.sim_exceptions import DomainException
from schemas.model import RunSample, SinkageModelParams, SlipModelParams
from services.vehicle import slip_ratio

log = logging.getLogger(__name__)

ALPHA_WINDOW_DEG = 25.0


def _clamp(value: float, upper: float) -> float:
    return min(max(value, 0.0), upper)


def slip_flat(v_w: float, p: SlipModelParams) -> float:
    """Steady-state slip on level ground as a linear function of wheel speed."""
    if v_w < 0.0:
        raise DomainException(f"Wheel speed must be non-negative, got {v_w}")
    return _clamp(p.a_v * v_w + p.b_v, p.s_max)


def slip_slope(v_w: float, alpha: float, p: SlipModelParams) -> float:
    """Level-ground line plus the quadratic slope term, clamped to [0, s_max]."""
    if v_w < 0.0:
        raise DomainException(f"Wheel speed must be non-negative, got {v_w}")
    if abs(alpha) > ALPHA_WINDOW_DEG:
        raise DomainException(
            f"Slope {alpha} deg outside the model window of +/-{ALPHA_WINDOW_DEG} deg"
        )
    raw = (p.a_alpha * v_w + p.b_alpha) * alpha * alpha + p.a_v * v_w + p.b_v
    return _clamp(raw, p.s_max)


def sinkage(s: float, F_z: float, p: SinkageModelParams) -> float:
    """Sinkage of the base radius in mm, negative down."""
    if not 0.0 <= s <= 1.0:
        raise DomainException(f"Slip must lie in [0, 1] for the sinkage model, got {s}")
    if F_z < 0.0:
        raise DomainException(f"Vertical load must be non-negative, got {F_z}")
    return p.c_s * s + p.c_F * (F_z - p.F_ref) + p.c_0


def align_encoder(samples: Sequence[RunSample]) -> list[RunSample]:
    t = np.array([sample.t for sample in samples], dtype=float)
    known = [i for i, sample in enumerate(samples) if sample.omega is not None]
    if not known:
        raise DomainException("Run contains no encoder readings")
    if len(known) == len(samples):
        return list(samples)

    omega = np.interp(t, t[known], [samples[i].omega for i in known])
    log.debug("Interpolated %d encoder readings", len(samples) - len(known))
    return [
        sample if sample.omega is not None else sample.model_copy(update={"omega": float(w)})
        for sample, w in zip(samples, omega)
    ]


def slip_from_run(samples: Sequence[RunSample], R_eff: float) -> list[tuple[float, float]]:
    if R_eff <= 0.0:
        raise DomainException(f"Effective radius must be positive, got {R_eff}")
    if any(sample.omega is None for sample in samples):
        samples = align_encoder(samples)
    return [(sample.t, slip_ratio(sample.v, sample.omega, R_eff)) for sample in samples]


def slip_from_section(distance: float, duration: float, revolutions: float, R: float) -> float:
    """Average slip over a timed traverse of a marked section."""
    if distance <= 0.0 or duration <= 0.0:
        raise DomainException("Section distance and duration must be positive")
    if revolutions < 0.0:
        raise DomainException(f"Revolutions must be non-negative, got {revolutions}")
    v = distance / duration
    omega = 2.0 * math.pi * revolutions / duration
    return slip_ratio(v, omega, R)


def relative_sinkage(values: Sequence[float], index0: int = 0) -> list[float]:
    reference = values[index0]
    return [value - reference for value in values]
