import logging
import math

from exceptions.sim_exceptions import DomainException, NumericException
from schemas.contact import ContactMode, ContactParams, ContactState
from schemas.model import SinkageModelParams
from schemas.vehicle import WheelGeometry
from services.model import sinkage

log = logging.getLogger(__name__)

ODE_SUBSTEP = 1e-3


def stiffness(F_z: float, z_target: float, h: float, N: int, params: ContactParams) -> float:
    """Stiffness that sinks the physics geometry (radius r + h) to `z_target` mm under `F_z`."""
    force = max(F_z, params.F_z_min)
    denom = max(h - z_target / 1000.0, params.denom_min)
    return force / (N * denom)


def critical_damping(k: float, m: float) -> float:
    if k <= 0.0 or m <= 0.0:
        raise DomainException(f"Damping needs positive stiffness and mass, got k={k}, m={m}")
    return 2.0 * math.sqrt(k * m)


def quasi_static_penetration(F_z: float, k: float) -> float:
    return F_z / k


def reported_sinkage(p: float, h: float) -> float:
    """Sinkage of the base radius in mm from the physics-geometry penetration in m."""
    return -(p - h) * 1000.0


def step_vertical_ode(state: ContactState, m: float, g: float, dt: float) -> ContactState:
    """Semi-implicit spring-damper integration in substeps of at most ODE_SUBSTEP."""
    if dt <= 0.0:
        raise DomainException(f"dt must be positive, got {dt}")

    n_sub = max(1, math.ceil(dt / ODE_SUBSTEP - 1e-9))
    h = dt / n_sub
    k, c = state.k, state.c
    z, zdot = state.z_body, state.zdot

    for _ in range(n_sub):
        if z < 0.0:
            zdot = (zdot + h * (-g - k / m * z)) / (1.0 + h * c / m + h * h * k / m)
        else:
            zdot = zdot - g * h
        z = z + h * zdot

    if not (math.isfinite(z) and math.isfinite(zdot)):
        log.error("Failed vertical contact step > z=%s zdot=%s k=%s c=%s", z, zdot, k, c)
        raise NumericException(f"Non-finite contact state: z={z}, zdot={zdot}")

    p = max(0.0, -z)
    force = k * p + c * max(0.0, -zdot) if p > 0.0 else 0.0
    return state.model_copy(update={"z_body": z, "zdot": zdot, "p": p, "force": force})


def latch_sinkage(z_prev: float | None, z_new: float, v: float, v_min: float) -> float:
    """Below v_min sinkage may only deepen (more negative mm)."""
    if z_prev is not None and v <= v_min:
        return min(z_prev, z_new)
    return z_new


def update_contact(
    F_z: float,
    s: float,
    v: float,
    geom: WheelGeometry,
    sink_model: SinkageModelParams,
    params: ContactParams,
    state: ContactState,
    m: float,
    g: float,
    dt: float,
    k_override: float | None = None,
) -> ContactState:
    values = (F_z, s, v, m, g, dt)
    if not all(math.isfinite(value) for value in values):
        raise NumericException(f"Non-finite contact input: {values}")

    point_load = F_z / params.N
    if k_override is not None:
        k = k_override
        z_latched = state.z_latched
    else:
        z_target = sinkage(min(1.0, abs(s)), F_z, sink_model)
        z_target = latch_sinkage(state.z_latched, z_target, v, params.v_min)
        k = stiffness(F_z, z_target, geom.h, params.N, params)
        z_latched = z_target
    c = critical_damping(k, m)

    if params.mode is ContactMode.quasi_static:
        p = quasi_static_penetration(point_load, k)
        return state.model_copy(
            update={
                "k": k, "c": c, "p": p, "z_body": -p, "zdot": 0.0,
                "z_latched": z_latched, "force": k * p,
            }
        )

    stepped = step_vertical_ode(
        state.model_copy(update={"k": k, "c": c}), m, point_load / m, dt
    )
    return stepped.model_copy(update={"z_latched": z_latched})
