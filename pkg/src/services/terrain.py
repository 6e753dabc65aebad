import logging
import math

import numpy as np

from exceptions.sim_exceptions import BoundsException, DomainException
from schemas.terrain import DemChannel, RockSpec, TerrainKind, TerrainSpec, TracePatternParams
from schemas.vehicle import WheelGeometry

log = logging.getLogger(__name__)


def trace_pattern(
    s: float,
    F_z: float,
    F_ref: float,
    arc_pos: float | np.ndarray,
    geom: WheelGeometry,
    p: TracePatternParams,
) -> float | np.ndarray:
    """Grouser trace height in meters at ground-fixed arc position(s)."""
    if not 0.0 <= s <= 1.0:
        raise DomainException(f"Slip must lie in [0, 1] for the trace pattern, got {s}")
    if F_z < 0.0:
        raise DomainException(f"Vertical load must be non-negative, got {F_z}")
    wavelength = p.lambda_scale * 2.0 * math.pi * geom.R / geom.n_grousers
    amplitude = p.A0 * max(0.0, 1.0 - s / p.s_clamp) * min(2.0, F_z / F_ref)
    return amplitude * np.sin(2.0 * math.pi * np.asarray(arc_pos) / wavelength)


def contact_patch_length(R: float, z_sink_m: float) -> float:
    """Chord of the wheel circle at the given sinkage depth."""
    z = abs(z_sink_m)
    return 2.0 * math.sqrt(max(0.0, 2.0 * R * z - z * z))


class TerrainGrid:
    """
    Arrays are indexed [i, j] with i along x and j along y; cell (i, j) is
    centered at origin + (i, j) * resolution. Rendered elevation is always
    base + d + w.
    """

    def __init__(
        self,
        base: np.ndarray,
        resolution: float,
        origin: tuple[float, float] = (0.0, 0.0),
    ) -> None:
        if resolution <= 0.0:
            raise DomainException(f"Grid resolution must be positive, got {resolution}")
        self.base = np.array(base, dtype=float)
        if self.base.ndim != 2 or min(self.base.shape) < 2:
            raise DomainException(f"Grid needs at least 2x2 cells, got shape {self.base.shape}")
        self.nx, self.ny = self.base.shape
        self.resolution = resolution
        self.origin = (float(origin[0]), float(origin[1]))
        self.d = np.zeros_like(self.base)
        self.w = np.zeros_like(self.base)
        self.k_override = np.full_like(self.base, np.nan)

    @classmethod
    def flat(cls, nx: int, ny: int, resolution: float, origin=(0.0, 0.0)) -> "TerrainGrid":
        return cls(np.zeros((nx, ny)), resolution, origin)

    @classmethod
    def inclined(
        cls, nx: int, ny: int, resolution: float, slope_deg: float, origin=(0.0, 0.0)
    ) -> "TerrainGrid":
        """Plane rising along +x with the given inclination."""
        x = origin[0] + np.arange(nx) * resolution
        base = np.repeat((x * math.tan(math.radians(slope_deg)))[:, None], ny, axis=1)
        return cls(base, resolution, origin)

    @property
    def rendered(self) -> np.ndarray:
        return self.base + self.d + self.w

    def channel(self, channel: DemChannel) -> np.ndarray:
        if channel is DemChannel.base:
            return self.base
        if channel is DemChannel.depth:
            return self.d
        if channel is DemChannel.trace:
            return self.w
        return self.rendered

    def add_rock(self, rock: RockSpec) -> int:
        """Mark cells within the rock radius as rigid; returns the cell count."""
        xs, ys = self._cell_centers()
        mask = (xs - rock.x) ** 2 + (ys - rock.y) ** 2 <= rock.radius**2
        self.k_override[mask] = rock.stiffness
        return int(mask.sum())

    def _cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.origin[0] + np.arange(self.nx) * self.resolution
        y = self.origin[1] + np.arange(self.ny) * self.resolution
        return np.meshgrid(x, y, indexing="ij")

    def _fractional_index(self, x: float, y: float) -> tuple[float, float]:
        fi = (x - self.origin[0]) / self.resolution
        fj = (y - self.origin[1]) / self.resolution
        eps = 1e-9
        if not (-eps <= fi <= self.nx - 1 + eps and -eps <= fj <= self.ny - 1 + eps):
            raise BoundsException(f"Point ({x:.4f}, {y:.4f}) lies outside the terrain grid")
        return min(max(fi, 0.0), self.nx - 1.0), min(max(fj, 0.0), self.ny - 1.0)

    def cell_at(self, x: float, y: float) -> tuple[int, int]:
        fi, fj = self._fractional_index(x, y)
        return int(round(fi)), int(round(fj))

    def stiffness_override(self, x: float, y: float) -> float | None:
        value = self.k_override[self.cell_at(x, y)]
        return None if np.isnan(value) else float(value)

    def height_at(self, x: float, y: float) -> float:
        """Bilinear interpolation of the rendered elevation."""
        fi, fj = self._fractional_index(x, y)
        i0 = min(int(math.floor(fi)), self.nx - 2)
        j0 = min(int(math.floor(fj)), self.ny - 2)
        tx, ty = fi - i0, fj - j0
        window = (slice(i0, i0 + 2), slice(j0, j0 + 2))
        cells = self.base[window] + self.d[window] + self.w[window]
        return float(
            cells[0, 0] * (1 - tx) * (1 - ty)
            + cells[1, 0] * tx * (1 - ty)
            + cells[0, 1] * (1 - tx) * ty
            + cells[1, 1] * tx * ty
        )

    def slope_at(self, x: float, y: float, heading: float) -> float:
        """Slope angle in degrees along `heading`, positive uphill."""
        r = self.resolution
        gx = (self.height_at(x + r, y) - self.height_at(x - r, y)) / (2.0 * r)
        gy = (self.height_at(x, y + r) - self.height_at(x, y - r)) / (2.0 * r)
        along = gx * math.cos(heading) + gy * math.sin(heading)
        return math.degrees(math.atan(along))

    def deform(self, cell: tuple[int, int], d_new: float, w_new: float) -> None:
        i, j = cell
        if not (0 <= i < self.nx and 0 <= j < self.ny):
            raise BoundsException(f"Cell {cell} lies outside the terrain grid")
        if d_new > 0.0:
            raise DomainException(f"Depth must be non-positive, got {d_new}")
        self.d[i, j] += min(0.0, d_new - self.d[i, j])
        self.w[i, j] = w_new

    def imprint_wheel(
        self,
        wheel_pose: tuple[float, float, float],
        z_sink: float,
        s: float,
        F_z: float,
        F_ref: float,
        geom: WheelGeometry,
        p: TracePatternParams,
        arc_pos: float,
        swept: float = 0.0,
    ) -> int:
        """Stamp one wheel footprint into d and w; returns the number of cells stamped."""
        x0, y0, heading = wheel_pose
        d_new = min(0.0, z_sink / 1000.0)
        half_len = 0.5 * contact_patch_length(geom.R, d_new)
        half_width = 0.5 * geom.width
        reach = half_len + swept + half_width

        corners = [(x0 - reach, y0 - reach), (x0 + reach, y0 + reach)]
        for cx, cy in corners:
            self._fractional_index(cx, cy)

        i_lo, j_lo = self.cell_at(x0 - reach, y0 - reach)
        i_hi, j_hi = self.cell_at(x0 + reach, y0 + reach)
        window = (slice(i_lo, i_hi + 1), slice(j_lo, j_hi + 1))
        xs = self.origin[0] + np.arange(i_lo, i_hi + 1) * self.resolution
        ys = self.origin[1] + np.arange(j_lo, j_hi + 1) * self.resolution
        dx, dy = np.meshgrid(xs - x0, ys - y0, indexing="ij")
        along = dx * math.cos(heading) + dy * math.sin(heading)
        across = -dx * math.sin(heading) + dy * math.cos(heading)

        mask = (
            (along >= -half_len - swept - 1e-12)
            & (along <= half_len + 1e-12)
            & (np.abs(across) <= half_width + 1e-12)
        )
        ci, cj = self.cell_at(x0, y0)
        if i_lo <= ci <= i_hi and j_lo <= cj <= j_hi:
            mask[ci - i_lo, cj - j_lo] = True
        mask &= np.isnan(self.k_override[window])

        w_new = trace_pattern(s, F_z, F_ref, arc_pos + along, geom, p)
        d_view = self.d[window]
        w_view = self.w[window]
        d_view[mask] += np.minimum(0.0, d_new - d_view[mask])
        w_view[mask] = np.broadcast_to(w_new, mask.shape)[mask]
        return int(mask.sum())


def build_terrain(spec: TerrainSpec, heightmap: TerrainGrid | None = None) -> TerrainGrid:
    """Construct the grid described by a `TerrainSpec` and stamp its rocks."""
    if spec.kind is TerrainKind.heightmap:
        if heightmap is None:
            raise DomainException("Heightmap terrain needs a loaded grid")
        grid = heightmap
    else:
        nx = int(math.ceil(spec.length / spec.resolution)) + 1
        ny = int(math.ceil(spec.width / spec.resolution)) + 1
        if spec.kind is TerrainKind.slope:
            grid = TerrainGrid.inclined(nx, ny, spec.resolution, spec.slope_deg, spec.origin)
        else:
            grid = TerrainGrid.flat(nx, ny, spec.resolution, spec.origin)

    for rock in spec.rocks:
        cells = grid.add_rock(rock)
        log.debug("Placed rock at (%.2f, %.2f) over %d cells", rock.x, rock.y, cells)
    log.info("Built %s terrain %dx%d at %.3f m/cell", spec.kind.value, grid.nx, grid.ny, grid.resolution)
    return grid
