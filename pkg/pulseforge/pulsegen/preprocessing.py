"""
Standardization of raw intensities into fixed-length profiles
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..core.exceptions import DegeneratePulseError
from ..data.models import ProfileTag, TimeGrid
from .profiles import IntensityProfile

logger = logging.getLogger(__name__)

SUPPORT_SPAN = 30e-12
SUPPORT_THRESHOLD = 1e-3
MIN_SUPPORT_SAMPLES = 3
MAX_REFINEMENTS = 8


def _crossing(roots: np.ndarray, values: np.ndarray, times: np.ndarray, level: float, i: int) -> float:
    # pchip is monotone between nodes i and i + 1, so at most one root lies there
    left, right = times[i], times[i + 1]
    inside = roots[(roots >= left) & (roots <= right)]
    if inside.size:
        return float(inside[0])
    v0, v1 = values[i], values[i + 1]
    return float(left + (level - v0) / (v1 - v0) * (right - left))


def measure_support(
    values: np.ndarray,
    times: np.ndarray,
    threshold: float = SUPPORT_THRESHOLD,
    interp: Optional[PchipInterpolator] = None,
) -> Tuple[float, float]:
    """Outermost crossings of ``threshold`` (relative to the peak) with sub-sample precision"""
    values = np.asarray(values, dtype=np.float64)
    peak = float(np.max(values)) if values.size else 0.0
    if not np.isfinite(peak) or peak <= 0:
        raise DegeneratePulseError("intensity has no positive samples")
    level = threshold * peak
    above = np.flatnonzero(values >= level)
    if above.size < MIN_SUPPORT_SAMPLES:
        raise DegeneratePulseError(
            f"support covers {above.size} samples, at least {MIN_SUPPORT_SAMPLES} needed"
        )
    if interp is None:
        interp = PchipInterpolator(times, values, extrapolate=False)
    roots = np.asarray(interp.solve(level, extrapolate=False), dtype=np.float64)

    first, last = int(above[0]), int(above[-1])
    lo = times[0] if first == 0 else _crossing(roots, values, times, level, first - 1)
    hi = times[-1] if last == len(times) - 1 else _crossing(roots, values, times, level, last)
    return float(lo), float(hi)


def centroid(values: np.ndarray, times: np.ndarray) -> float:
    """Temporal center of mass"""
    total = float(np.sum(values))
    if total <= 0:
        raise DegeneratePulseError("centroid of a pulse without energy")
    return float(np.sum(times * values) / total)


def measure_fwhm(values: np.ndarray, times: np.ndarray) -> float:
    """Full width at half maximum from linearly interpolated half-maximum crossings"""
    values = np.asarray(values, dtype=np.float64)
    peak = float(np.max(values))
    if peak <= 0:
        raise DegeneratePulseError("FWHM of a pulse without positive samples")
    half = 0.5 * peak
    above = np.flatnonzero(values >= half)
    first, last = int(above[0]), int(above[-1])

    def between(i: int, j: int) -> float:
        v0, v1 = values[i], values[j]
        return float(times[i] + (half - v0) / (v1 - v0) * (times[j] - times[i]))

    lo = times[0] if first == 0 else between(first - 1, first)
    hi = times[-1] if last == len(values) - 1 else between(last, last + 1)
    return float(hi - lo)


def _resample(interp: PchipInterpolator, center: float, scale: float, out_times: np.ndarray, out_center: float) -> np.ndarray:
    source = center + (out_times - out_center) / scale
    values = np.nan_to_num(interp(source), nan=0.0)
    values = np.maximum(values, 0.0)
    peak = float(np.max(values))
    if peak <= 0:
        raise DegeneratePulseError("resampled profile vanished")
    return values / peak


def preprocess(
    raw: np.ndarray,
    synthesis_grid: TimeGrid,
    out_grid: TimeGrid,
    support_span: float = SUPPORT_SPAN,
    threshold: float = SUPPORT_THRESHOLD,
    tag: ProfileTag = ProfileTag.INPUT,
) -> IntensityProfile:
    """
    Peak-normalize, center, rescale the support to ``support_span`` and resample onto ``out_grid``.

    The centroid and support are re-measured on the output and the mapping is refined
    until both hold on the output grid itself, so a second pass is a no-op.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.shape != (synthesis_grid.n_points,):
        raise DegeneratePulseError(
            f"raw intensity has shape {raw.shape}, grid expects {synthesis_grid.n_points} samples"
        )
    if not np.all(np.isfinite(raw)):
        raise DegeneratePulseError("raw intensity contains non-finite values")
    peak = float(np.max(raw))
    if peak <= 0:
        raise DegeneratePulseError("all-zero intensity")

    normalized = np.maximum(raw / peak, 0.0)
    times = synthesis_grid.times()
    interp = PchipInterpolator(times, normalized, extrapolate=False)
    lo, hi = measure_support(normalized, times, threshold, interp)
    if hi <= lo:
        raise DegeneratePulseError("support has zero length")

    center = centroid(normalized, times)
    scale = support_span / (hi - lo)
    out_times = out_grid.times()
    out_center = out_grid.center

    values = _resample(interp, center, scale, out_times, out_center)
    for _ in range(MAX_REFINEMENTS):
        offset = centroid(values, out_times) - out_center
        out_lo, out_hi = measure_support(values, out_times, threshold)
        width = out_hi - out_lo
        if abs(offset) <= 1e-6 * out_grid.delta_t and abs(width - support_span) <= 1e-9 * support_span:
            break
        center += offset / scale
        scale *= support_span / width
        values = _resample(interp, center, scale, out_times, out_center)
    else:
        logger.debug(f"Profile refinement stopped with centroid offset {offset:.3e} s")

    return IntensityProfile(out_grid, values, tag)


def pulse_energy(profile: IntensityProfile) -> float:
    """Sum of intensity times delta_t, in seconds"""
    return float(np.sum(profile.values) * profile.grid.delta_t)
