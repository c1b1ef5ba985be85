"""
Intensity profiles as emission-time probability densities, and their quantiles
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from ..core.exceptions import DegenerateDensityError, ShapeMismatchError, UsageError
from ..data.models import TimeGrid
from ..diffcore import DiffArray, as_diff, constant, ops

PICOSECONDS = 1e12


@dataclass(frozen=True)
class EmissionDensity:
    """
    Probability density over the grid times.

    ``times`` are in units of ``1 / time_scale`` seconds (picoseconds by default);
    ``cdf`` is the cumulative trapezoidal integral of ``pdf``, rescaled so its last
    entry is exactly one.
    """
    grid: TimeGrid
    pdf: np.ndarray
    cdf: np.ndarray
    time_scale: float = PICOSECONDS

    @property
    def times(self) -> np.ndarray:
        return self.grid.times() * self.time_scale

    @property
    def step(self) -> float:
        return self.grid.delta_t * self.time_scale

    def to_seconds(self, times: np.ndarray) -> np.ndarray:
        return np.asarray(times, dtype=np.float64) / self.time_scale

    def mass(self) -> float:
        return float(trapezoid(self.pdf, dx=self.step))

    def mean(self) -> float:
        return float(trapezoid(self.times * self.pdf, dx=self.step))


def normalize_to_density(
    values: np.ndarray, grid: TimeGrid, time_scale: float = PICOSECONDS
) -> EmissionDensity:
    """Clamp negatives to zero and divide by the trapezoidal integral"""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (grid.n_points,):
        raise ShapeMismatchError(f"profile has shape {values.shape}, grid has {grid.n_points} points")
    if not np.all(np.isfinite(values)):
        raise DegenerateDensityError("profile contains non-finite values")
    clamped = np.maximum(values, 0.0)
    step = grid.delta_t * time_scale
    total = float(trapezoid(clamped, dx=step))
    if total <= 0:
        raise DegenerateDensityError("profile has no positive mass")
    pdf = clamped / total
    cdf = cumulative_trapezoid(pdf, dx=step, initial=0.0)
    return EmissionDensity(grid=grid, pdf=pdf, cdf=cdf / cdf[-1], time_scale=time_scale)


def _check_levels(u: Union[float, np.ndarray]) -> np.ndarray:
    levels = np.asarray(u, dtype=np.float64)
    if np.any(~np.isfinite(levels)) or np.any(levels < 0) or np.any(levels > 1):
        raise UsageError("quantile levels must lie in [0, 1]")
    return levels


def bracket(cdf: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Index j of the first CDF entry with F[j] >= u, so F[j - 1] < u <= F[j] for u > 0"""
    return np.clip(np.searchsorted(cdf, levels, side="left"), 1, len(cdf) - 1)


def quantile(density: EmissionDensity, u: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Inverse CDF with linear interpolation between grid times.

    ``u = 0`` maps to the last grid time with zero cumulative mass, the start of the
    first interval carrying mass; ``u = 1`` maps to the end of the last such interval.
    """
    levels = _check_levels(u)
    flat = levels.reshape(-1)
    times, cdf = density.times, density.cdf
    j = bracket(cdf, flat)
    lo, hi = cdf[j - 1], cdf[j]
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(hi > lo, (flat - lo) / (hi - lo), 0.0)
    result = times[j - 1] + frac * (times[j] - times[j - 1])
    zero = flat == 0
    if np.any(zero):
        result[zero] = times[np.searchsorted(cdf, 0.0, side="right") - 1]
    if levels.ndim == 0:
        return float(result[0])
    return result.reshape(levels.shape)


def density_graph(values: Union[DiffArray, np.ndarray], step: float) -> DiffArray:
    """Differentiable CDF of one decoded profile [L] sampled every ``step``"""
    v = ops.relu(as_diff(values))
    trapezoids = ops.mul(ops.add(v[:-1], v[1:]), 0.5 * step)
    cumulative = ops.concat([constant(np.zeros(1)), ops.cumsum(trapezoids)])
    total = cumulative[-1]
    if not total.item() > 0:
        raise DegenerateDensityError("profile has no positive mass")
    return ops.div(cumulative, total)


def quantile_graph(cdf: DiffArray, times: np.ndarray, levels: np.ndarray) -> DiffArray:
    """Differentiable quantiles at interior levels; the bracketing interval is held fixed"""
    j = bracket(cdf.values, levels)
    lo, hi = cdf[j - 1], cdf[j]
    frac = ops.div(ops.sub(constant(levels), lo), ops.sub(hi, lo))
    return ops.add(constant(times[j - 1]), ops.mul(frac, constant(times[j] - times[j - 1])))


def midpoint_levels(n_quad: int) -> np.ndarray:
    if n_quad < 1:
        raise UsageError(f"quadrature needs at least one node, got {n_quad}")
    return (np.arange(n_quad, dtype=np.float64) + 0.5) / n_quad


def support(density: EmissionDensity) -> Tuple[float, float]:
    """Times bracketing all of the mass"""
    return float(quantile(density, 0.0)), float(quantile(density, 1.0))
