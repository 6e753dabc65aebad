import numpy as np

from exceptions.sim_exceptions import FitException


def least_squares(design: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Ordinary least squares; returns (coefficients, residual RMS, R^2)."""
    design = np.asarray(design, dtype=float)
    target = np.asarray(target, dtype=float)

    if design.ndim != 2 or design.shape[0] != target.shape[0]:
        raise FitException("Design matrix and observations do not line up")
    if design.shape[0] < design.shape[1]:
        raise FitException(
            f"Need at least {design.shape[1]} samples, got {design.shape[0]}"
        )
    rank = np.linalg.matrix_rank(design)
    if rank < design.shape[1]:
        raise FitException(
            f"Rank-deficient design: rank {rank} < {design.shape[1]} regressors"
        )

    coeffs = np.linalg.lstsq(design, target, rcond=None)[0]
    residual = target - design @ coeffs
    rms = float(np.sqrt(np.mean(residual**2)))
    ss_tot = float(np.sum((target - target.mean()) ** 2))
    ss_res = float(np.sum(residual**2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return coeffs, rms, r2
