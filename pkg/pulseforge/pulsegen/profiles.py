"""
Array-carrying pulse representations
"""

from dataclasses import dataclass

import numpy as np

from ..core.exceptions import ShapeMismatchError
from ..data.models import FrequencyGrid, ProfileTag, TimeGrid


@dataclass(frozen=True)
class SpectralField:
    """Complex field E(omega) sampled on a frequency grid"""
    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n_points,):
            raise ShapeMismatchError(
                f"spectral field needs {self.grid.n_points} samples, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("spectral field contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def time_grid(self) -> TimeGrid:
        return self.grid.synthesis_grid()


@dataclass(frozen=True)
class IntensityProfile:
    """Real temporal intensity on a time grid"""
    grid: TimeGrid
    values: np.ndarray
    tag: ProfileTag = ProfileTag.INPUT

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.n_points,):
            raise ShapeMismatchError(
                f"profile needs {self.grid.n_points} samples, got {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def times(self) -> np.ndarray:
        return self.grid.times()

    def centroid(self) -> float:
        total = float(np.sum(self.values))
        if total <= 0:
            return self.grid.center
        return float(np.sum(self.times() * self.values) / total)
