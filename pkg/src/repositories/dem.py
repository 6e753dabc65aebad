import logging
from pathlib import Path

import numpy as np
import rasterio
from rasterio.errors import RasterioError
from rasterio.transform import from_origin

from exceptions.sim_exceptions import FormatException
from schemas.terrain import DemChannel
from services.terrain import TerrainGrid

log = logging.getLogger(__name__)

NODATA_VALUE = -9999
DECIMAL_PRECISION = 6


class DemRepository:
    """ESRI ASCII grid persistence for terrain channels. Row 0 is the northern edge."""

    def write(self, grid: TerrainGrid, path: Path, channel: DemChannel = DemChannel.rendered) -> Path:
        return self.write_array(grid.channel(channel), grid, path)

    def write_mask(self, grid: TerrainGrid, path: Path, threshold_mm: float) -> Path:
        """Binary grid marking cells whose permanent depth exceeds the threshold."""
        mask = (grid.d < -threshold_mm / 1000.0).astype(np.int32)
        return self.write_array(mask, grid, path)

    def write_array(self, values: np.ndarray, grid: TerrainGrid, path: Path) -> Path:
        path = Path(path)
        res = grid.resolution
        west = grid.origin[0] - res / 2.0
        north = grid.origin[1] + (grid.ny - 1) * res + res / 2.0
        rows = np.ascontiguousarray(values.T[::-1])
        options = {}
        if np.issubdtype(rows.dtype, np.floating):
            rows = rows.astype(np.float64)
            options["DECIMAL_PRECISION"] = DECIMAL_PRECISION

        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with rasterio.open(
                path,
                "w",
                driver="AAIGrid",
                height=grid.ny,
                width=grid.nx,
                count=1,
                dtype=rows.dtype.name,
                transform=from_origin(west, north, res, res),
                nodata=NODATA_VALUE,
                **options,
            ) as dst:
                dst.write(rows, 1)
        except (RasterioError, OSError) as e:
            log.error("Failed write DEM %s > %s", path, e)
            raise
        log.info("Wrote DEM %s (%dx%d)", path, grid.nx, grid.ny)
        return path

    def read(self, path: Path) -> TerrainGrid:
        path = Path(path)
        try:
            with rasterio.open(path) as src:
                rows = src.read(1, masked=True)
                transform = src.transform
        except (RasterioError, OSError, ValueError) as e:
            log.error("Failed read DEM %s > %s", path, e)
            raise FormatException(f"Cannot read ESRI ASCII grid {path}: {e}")

        res = transform.a
        if res <= 0.0 or not np.isclose(-transform.e, res):
            raise FormatException(f"Grid {path} must have square cells, got {transform.a} x {-transform.e}")
        nrows = rows.shape[0]
        origin = (transform.c + res / 2.0, transform.f - nrows * res + res / 2.0)

        base = np.ma.getdata(rows)[::-1].T.astype(float)
        nodata = np.ma.getmaskarray(rows)[::-1].T
        if nodata.any():
            log.warning("Grid %s has %d NODATA cells, filling with lowest elevation", path, nodata.sum())
            base[nodata] = base[~nodata].min() if (~nodata).any() else 0.0
        return TerrainGrid(base, res, origin)
