"""
One-dimensional 2-Wasserstein distance via quantile functions
"""

import math

import numpy as np

from ..core.exceptions import ShapeMismatchError, UsageError
from ..diffcore import DiffArray, ops
from .density import EmissionDensity, midpoint_levels, quantile, quantile_graph

N_QUAD = 1024
MIN_QUAD = 64


def _check_quad(n_quad: int) -> np.ndarray:
    if n_quad < MIN_QUAD:
        raise UsageError(f"n_quad must be at least {MIN_QUAD}, got {n_quad}")
    return midpoint_levels(n_quad)


def w2_1d(a: EmissionDensity, b: EmissionDensity, n_quad: int = N_QUAD) -> float:
    """sqrt of the midpoint-rule integral of (Q_a(u) - Q_b(u))^2 over (0, 1)"""
    if a.time_scale != b.time_scale:
        raise ShapeMismatchError("densities are expressed in different time units")
    levels = _check_quad(n_quad)
    diff = np.asarray(quantile(a, levels)) - np.asarray(quantile(b, levels))
    return math.sqrt(float(np.mean(diff * diff)))


def w2_graph(cdf_a: DiffArray, cdf_b: DiffArray, times: np.ndarray, n_quad: int = N_QUAD) -> DiffArray:
    """Differentiable counterpart of ``w2_1d`` for two CDFs on the same times"""
    if cdf_a.shape != cdf_b.shape or cdf_a.shape != times.shape:
        raise ShapeMismatchError("CDFs must share one time axis")
    levels = _check_quad(n_quad)
    diff = ops.sub(quantile_graph(cdf_a, times, levels), quantile_graph(cdf_b, times, levels))
    return ops.sqrt(ops.mean(ops.mul(diff, diff)))
