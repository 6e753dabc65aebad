import math

from exceptions.sim_exceptions import DomainException
from schemas.vehicle import FrictionParams, LimiterParams, RoverState, WheelGeometry

SLIP_EPS = 1e-6


def slip_ratio(v: float, omega: float, R: float) -> float:
    """Positive while driving, negative in skid, zero at standstill."""
    if v < 0.0 or omega < 0.0:
        raise DomainException(f"Slip ratio needs non-negative speeds, got v={v}, omega={omega}")
    if R <= 0.0:
        raise DomainException(f"Effective radius must be positive, got {R}")

    surface = omega * R
    if v < SLIP_EPS and surface < SLIP_EPS:
        return 0.0
    if surface >= v:
        return 1.0 - v / surface
    return surface / v - 1.0


def target_velocity(v_w: float, s: float) -> float:
    return (1.0 - s) * v_w


def accel_limit(v: float, lim: LimiterParams) -> float:
    for breakpoint in lim.breakpoints:
        if v <= breakpoint.upper:
            return breakpoint.a_max
    return lim.breakpoints[-1].a_max


def step_longitudinal(
    state: RoverState,
    v_w_cmd: float,
    s: float,
    fric: FrictionParams,
    lim: LimiterParams,
    g: float,
    dt: float,
    geom: WheelGeometry,
    yaw_rate: float = 0.0,
) -> RoverState:
    if dt <= 0.0 or g <= 0.0:
        raise DomainException(f"dt and g must be positive, got dt={dt}, g={g}")

    v = state.v
    v_t = target_velocity(v_w_cmd, s)
    if v < v_t:
        v_next = min(v_t, v + accel_limit(v, lim) * dt)
    elif v > v_t:
        v_next = max(v_t, v - fric.mu_d * g * dt)
    else:
        v_next = v

    heading = state.heading + yaw_rate * dt
    R = geom.R
    d_cmd = v_w_cmd / R * dt
    d_phys = v_next / R * dt
    return state.model_copy(
        update={
            "v": v_next,
            "heading": heading,
            "x": state.x + v_next * dt * math.cos(heading),
            "y": state.y + v_next * dt * math.sin(heading),
            "theta_cmd": tuple(theta + d_cmd for theta in state.theta_cmd),
            "theta_phys": tuple(theta + d_phys for theta in state.theta_phys),
        }
    )


def stopping_profile(v0: float, fric: FrictionParams, g: float) -> tuple[float, float]:
    """Closed-form stop time and distance under constant Coulomb deceleration."""
    if v0 < 0.0:
        raise DomainException(f"Initial speed must be non-negative, got {v0}")
    a = fric.mu_d * g
    return v0 / a, v0 * v0 / (2.0 * a)
