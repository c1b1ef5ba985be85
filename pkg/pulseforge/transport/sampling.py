"""
Emission-time sampling by inverse-CDF transform
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..core.exceptions import UsageError
from ..diffcore import constant
from .density import EmissionDensity, normalize_to_density, quantile
from .geodesic import ProfileDecoder, linear_interpolate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmissionHistogram:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def density(self) -> np.ndarray:
        """Counts normalized to unit area"""
        total = float(self.counts.sum())
        widths = np.diff(self.edges)
        return self.counts / (total * widths) if total > 0 else np.zeros_like(widths)


def uniform_levels(n: int, seed: int, stratified: bool = True) -> np.ndarray:
    """
    ``n`` seeded uniforms on [0, 1).

    Stratified levels place one draw in each interval [i / n, (i + 1) / n) and are
    returned in shuffled order; each level is still uniform on [0, 1).
    """
    if n < 1:
        raise UsageError(f"particle count must be positive, got {n}")
    rng = np.random.default_rng(seed)
    if not stratified:
        return rng.random(n)
    levels = (np.arange(n, dtype=np.float64) + rng.random(n)) / n
    return rng.permutation(levels)


def sample_emission_times(
    density: EmissionDensity, n: int, seed: int = 0, stratified: bool = True
) -> np.ndarray:
    """Emission times in the density's time units, t_i = Q(u_i)"""
    times = np.asarray(quantile(density, uniform_levels(n, seed, stratified)))
    logger.debug(f"Sampled {n} emission times (mean {times.mean():.4f})")
    return times


def emission_histogram(
    times: np.ndarray, bins: int = 200, window: Optional[Tuple[float, float]] = None
) -> EmissionHistogram:
    if bins < 1:
        raise UsageError(f"histogram needs at least one bin, got {bins}")
    counts, edges = np.histogram(np.asarray(times, dtype=np.float64), bins=bins, range=window)
    return EmissionHistogram(edges=edges, counts=counts.astype(np.float64))


def histogram_l1(density: EmissionDensity, times: np.ndarray, bins: int = 200) -> float:
    """L1 distance between the normalized histogram of ``times`` and the target density"""
    grid_times = density.times
    histogram = emission_histogram(times, bins, (float(grid_times[0]), float(grid_times[-1])))
    target_mass = np.diff(np.interp(histogram.edges, grid_times, density.cdf))
    observed_mass = histogram.counts / max(float(histogram.counts.sum()), 1.0)
    return float(np.sum(np.abs(observed_mass - target_mass)))


@dataclass(frozen=True)
class EmissionFrame:
    """Decoded profile of one interpolation waypoint and its sampled emission times"""
    waypoint: int
    code: np.ndarray
    profile: np.ndarray
    times: np.ndarray
    histogram: EmissionHistogram


def interpolate_emission_series(
    decoder: ProfileDecoder,
    z_a: np.ndarray,
    z_b: np.ndarray,
    n_waypoints: int = 10,
    particles: int = 200_000,
    seed: int = 0,
    bins: int = 200,
) -> List[EmissionFrame]:
    """Emission times along the straight latent segment between two codes"""
    path = linear_interpolate(z_a, z_b, n_waypoints)
    profiles = decoder.graph(constant(path.waypoints)).numpy()
    frames = []
    for i, (code, profile) in enumerate(zip(path.waypoints, profiles)):
        density = normalize_to_density(profile, decoder.grid, decoder.time_scale)
        times = sample_emission_times(density, particles, seed=seed + i)
        window = (float(density.times[0]), float(density.times[-1]))
        frames.append(EmissionFrame(i, code, profile, times, emission_histogram(times, bins, window)))
    return frames
