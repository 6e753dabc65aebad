import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

from exceptions.sim_exceptions import AnalysisException, DomainException
from repositories.dem import DemRepository
from schemas.contact import ContactMode, ContactState
from schemas.model import ModelParams
from schemas.sim import (
    AlphaPolicy,
    CommandSpec,
    ErrorStats,
    PathKind,
    Scenario,
    SweepRow,
    TelemetryRecord,
    Waypoint,
    WorldState,
)
from schemas.terrain import TerrainKind
from schemas.vehicle import Quad, RoverState
from services.contact import reported_sinkage, update_contact
from services import model
from services.model import ALPHA_WINDOW_DEG, sinkage, slip_slope
from services.terrain import TerrainGrid, build_terrain
from services.vehicle import slip_ratio, step_longitudinal

log = logging.getLogger(__name__)

FRONT_LEFT, FRONT_RIGHT = 0, 1


def wheel_offsets(scenario: Scenario) -> list[tuple[float, float]]:
    """Body-frame (forward, left) offsets of fl, fr, rl, rr."""
    half_base = scenario.rover.wheelbase / 2.0
    half_track = scenario.rover.track / 2.0
    return [
        (half_base, half_track),
        (half_base, -half_track),
        (-half_base, half_track),
        (-half_base, -half_track),
    ]


def wheel_loads(scenario: Scenario, alpha: float) -> Quad:
    """Static per-wheel loads; pitch, arc load shift, then explicit overrides."""
    rover = scenario.rover
    a = math.radians(alpha)
    quarter = rover.mass * scenario.gravity * math.cos(a) / 4.0
    shift = rover.h_cg / rover.wheelbase * math.tan(a)
    loads = [quarter * (1.0 - shift)] * 2 + [quarter * (1.0 + shift)] * 2

    command = scenario.command
    if command.path is PathKind.arc:
        outer, inner = (FRONT_RIGHT, FRONT_LEFT) if command.arc_radius > 0 else (FRONT_LEFT, FRONT_RIGHT)
        boost = loads[outer] * command.outer_load_boost
        loads[outer] += boost
        loads[inner] -= boost

    if rover.load_override is not None:
        loads = [
            load if override is None else override
            for load, override in zip(loads, rover.load_override)
        ]
    return tuple(max(0.0, load) for load in loads)


def step_count(scenario: Scenario) -> int:
    return math.ceil(scenario.duration / scenario.dt - 1e-9)


class Simulator:
    """Fixed-timestep rover-terrain loop producing one telemetry record per step."""

    def __init__(self, scenario: Scenario, grid: TerrainGrid | None = None) -> None:
        self.scenario = scenario
        if grid is None:
            heightmap = None
            if scenario.terrain.kind is TerrainKind.heightmap:
                heightmap = DemRepository().read(scenario.terrain.heightmap)
            grid = build_terrain(scenario.terrain, heightmap)
        self.grid = grid
        self.offsets = wheel_offsets(scenario)

    def wheel_positions(self, rover: RoverState) -> list[tuple[float, float]]:
        cos_h, sin_h = math.cos(rover.heading), math.sin(rover.heading)
        return [
            (rover.x + fwd * cos_h - left * sin_h, rover.y + fwd * sin_h + left * cos_h)
            for fwd, left in self.offsets
        ]

    def slope(self, rover: RoverState) -> float:
        alpha = self.grid.slope_at(rover.x, rover.y, rover.heading)
        if abs(alpha) <= ALPHA_WINDOW_DEG:
            return alpha
        if self.scenario.alpha_policy is AlphaPolicy.clamp:
            return math.copysign(ALPHA_WINDOW_DEG, alpha)
        raise DomainException(
            f"Slope {alpha:.2f} deg at ({rover.x:.2f}, {rover.y:.2f}) outside the model window"
        )

    def initial_state(self) -> WorldState:
        """Rover at rest on its static sinkage (quasi-static equilibrium)."""
        sc = self.scenario
        rover = RoverState(x=sc.rover.x, y=sc.rover.y, heading=sc.rover.heading)
        alpha = self.slope(rover)
        loads = wheel_loads(sc, alpha)
        static = sc.contact.model_copy(update={"mode": ContactMode.quasi_static})
        contacts = []
        for i, ((x, y), load) in enumerate(zip(self.wheel_positions(rover), loads)):
            contacts.append(
                update_contact(
                    load, 0.0, 0.0, sc.rover.wheel, sc.models.sinkage, static, ContactState(),
                    sc.rover.contact_mass(i), sc.gravity, sc.dt,
                    k_override=self.grid.stiffness_override(x, y),
                )
            )
        z = tuple(reported_sinkage(c.p, sc.rover.wheel.h) for c in contacts)
        return WorldState(
            rover=rover.model_copy(update={"F_z": loads, "z": z}), contacts=tuple(contacts)
        )

    def step(self, world: WorldState) -> tuple[WorldState, TelemetryRecord]:
        sc = self.scenario
        geom = sc.rover.wheel
        t = world.step * sc.dt
        v_w = sc.command.v_w_at(t)
        rover = world.rover

        alpha = self.slope(rover)
        s_model = slip_slope(v_w, alpha, sc.models.slip)
        yaw_rate = rover.v / sc.command.arc_radius if sc.command.path is PathKind.arc else 0.0
        rover = step_longitudinal(
            rover, v_w, s_model, sc.friction, sc.limiter, sc.gravity, sc.dt, geom, yaw_rate
        )
        s = slip_ratio(rover.v, v_w / geom.R, geom.R)
        s_abs = min(1.0, abs(s))
        loads = wheel_loads(sc, alpha)

        travel = rover.v * sc.dt
        positions = self.wheel_positions(rover)
        contacts, z, distances = [], [], []
        for i, ((x, y), load) in enumerate(zip(positions, loads)):
            k_override = self.grid.stiffness_override(x, y)
            contact = update_contact(
                load, s, rover.v, geom, sc.models.sinkage, sc.contact, world.contacts[i],
                sc.rover.contact_mass(i), sc.gravity, sc.dt, k_override=k_override,
            )
            wheel_travel = travel
            if sc.command.path is PathKind.arc:
                wheel_travel = travel * (1.0 - self.offsets[i][1] / sc.command.arc_radius)
            contacts.append(contact)
            z.append(reported_sinkage(contact.p, geom.h))
            distances.append(world.wheel_distance[i] + wheel_travel)

            if sc.terrain.deformation_enabled and k_override is None:
                self.grid.imprint_wheel(
                    (x, y, rover.heading), z[i], s_abs, load, sc.models.sinkage.F_ref,
                    geom, sc.terrain.trace, distances[i], swept=wheel_travel,
                )

        rover = rover.model_copy(update={"F_z": loads, "z": tuple(z)})
        record = TelemetryRecord(
            t=(world.step + 1) * sc.dt,
            v_cmd=v_w,
            v=rover.v,
            s=s,
            alpha=alpha,
            z=tuple(z),
            F_z=loads,
            k=tuple(contact.k for contact in contacts),
            x=rover.x,
            y=rover.y,
            theta_cmd=rover.theta_cmd[0],
            theta_phys=rover.theta_phys[0],
        )
        world = world.model_copy(
            update={
                "step": world.step + 1,
                "rover": rover,
                "contacts": tuple(contacts),
                "wheel_distance": tuple(distances),
            }
        )
        return world, record

    def run(self) -> list[TelemetryRecord]:
        world = self.initial_state()
        records = []
        n_steps = step_count(self.scenario)
        for _ in range(n_steps):
            world, record = self.step(world)
            records.append(record)
        log.info(
            "Simulated %d steps (%.2f s), final v=%.4f m/s", n_steps, n_steps * self.scenario.dt, world.rover.v
        )
        return records


def run_scenario(scenario: Scenario, grid: TerrainGrid | None = None) -> list[TelemetryRecord]:
    return Simulator(scenario, grid).run()


def steady_records(telemetry: Sequence[TelemetryRecord], settle_s: float) -> list[TelemetryRecord]:
    steady = [record for record in telemetry if record.t > settle_s]
    if not steady:
        raise AnalysisException(f"No telemetry after the {settle_s} s settle window")
    return steady


def error_report(
    telemetry: Sequence[TelemetryRecord], models: ModelParams, settle_s: float = 3.0
) -> ErrorStats:
    """Slip errors in percentage points, sinkage errors in mm per wheel."""
    steady = steady_records(telemetry, settle_s)
    slip_errors, sinkage_errors = [], []
    for record in steady:
        alpha = max(-ALPHA_WINDOW_DEG, min(ALPHA_WINDOW_DEG, record.alpha))
        expected = slip_slope(record.v_cmd, alpha, models.slip)
        slip_errors.append(abs(record.s - expected) * 100.0)
        s_abs = min(1.0, abs(record.s))
        for z, load in zip(record.z, record.F_z):
            sinkage_errors.append(abs(z - sinkage(s_abs, load, models.sinkage)))

    stats = ErrorStats(
        slip_mae=sum(slip_errors) / len(slip_errors),
        slip_max=max(slip_errors),
        sinkage_mae=sum(sinkage_errors) / len(sinkage_errors),
        n_samples=len(steady),
    )
    log.info(
        "Steady-state errors: slip MAE %.4f pp, max %.4f pp, sinkage MAE %.4f mm",
        stats.slip_mae, stats.slip_max, stats.sinkage_mae,
    )
    return stats


def relative_sinkage(telemetry: Sequence[TelemetryRecord], t0: float) -> list[tuple[float, float]]:
    """Wheel-mean sinkage relative to the first record at or after t0."""
    tail = [r for r in telemetry if r.t >= t0]
    if not tail:
        raise AnalysisException(f"No telemetry at or after t = {t0}")
    z_rel = model.relative_sinkage([sum(r.z) / 4.0 for r in tail])
    return [(r.t, z) for r, z in zip(tail, z_rel)]


def steady_point(scenario: Scenario) -> SweepRow:
    steady = steady_records(run_scenario(scenario), scenario.settle_s)
    v_w = scenario.command.waypoints[-1].v_w
    alpha = scenario.terrain.slope_deg if scenario.terrain.kind is TerrainKind.slope else 0.0
    return SweepRow(
        v_w=v_w,
        alpha=alpha,
        s_steady=sum(r.s for r in steady) / len(steady),
        z_steady_mm=sum(sum(r.z) / 4.0 for r in steady) / len(steady),
    )


def sweep(
    points: Iterable[tuple[float, float]], template: Scenario, threads: int = 1
) -> list[SweepRow]:
    """Steady-state rows sorted by (v_w, alpha) whatever the thread count."""
    ordered = sorted(set(points))
    for v_w, alpha in ordered:
        if v_w < 0.0 or abs(alpha) > ALPHA_WINDOW_DEG:
            raise DomainException(f"Sweep point ({v_w}, {alpha}) outside the model window")

    scenarios = []
    for v_w, alpha in ordered:
        terrain = template.terrain.model_copy(
            update={
                "kind": TerrainKind.slope if alpha != 0.0 else TerrainKind.flat,
                "slope_deg": alpha,
            }
        )
        command = CommandSpec(waypoints=[Waypoint(t=0.0, v_w=v_w)])
        scenarios.append(template.model_copy(update={"terrain": terrain, "command": command}))

    log.info("Sweeping %d points on %d threads", len(scenarios), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(steady_point, scenarios))
