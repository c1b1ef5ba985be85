"""
Temporal intensity envelopes of the pulse families
"""

import math
from typing import Callable, Dict

import numpy as np

from ..core.exceptions import InvalidSpecError
from ..data.models import EnvelopeFamily, PulseSpec, TimeGrid

SECANT_ARG = math.acosh(math.sqrt(2.0))
FLATTOP_EDGE = 0.05

EnvelopeFn = Callable[[np.ndarray, int], np.ndarray]


def _gaussian(x: np.ndarray, order: int) -> np.ndarray:
    # x = 2t / sigma_t
    return np.exp(-math.log(2.0) * np.abs(x) ** (2 * order))


def _secant(x: np.ndarray, order: int) -> np.ndarray:
    return 1.0 / np.cosh(SECANT_ARG * x) ** 2


def _parabolic(x: np.ndarray, order: int) -> np.ndarray:
    return np.maximum(0.0, 1.0 - x * x)


def _triangular(x: np.ndarray, order: int) -> np.ndarray:
    return np.maximum(0.0, 1.0 - np.abs(x)) ** order


def _flattop(x: np.ndarray, order: int) -> np.ndarray:
    # raised-cosine edge occupying the outer 5% (of sigma_t) of each half width
    edge = 2.0 * FLATTOP_EDGE
    ax = np.abs(x)
    ramp = 0.5 * (1.0 + np.cos(math.pi * (ax - (1.0 - edge)) / edge))
    return np.where(ax <= 1.0 - edge, 1.0, np.where(ax < 1.0, ramp, 0.0))


ENVELOPES: Dict[EnvelopeFamily, EnvelopeFn] = {
    EnvelopeFamily.GAUSSIAN: _gaussian,
    EnvelopeFamily.SECANT: _secant,
    EnvelopeFamily.PARABOLIC: _parabolic,
    EnvelopeFamily.TRIANGULAR: _triangular,
    EnvelopeFamily.FLATTOP: _flattop,
}


def envelope_shape(family: EnvelopeFamily, order: int, sigma_t: float, times: np.ndarray) -> np.ndarray:
    """Intensity shape with peak 1 at t = 0; sigma_t in seconds"""
    try:
        fn = ENVELOPES[EnvelopeFamily(family)]
    except (KeyError, ValueError):
        raise InvalidSpecError(f"unknown envelope family: {family!r}") from None
    if sigma_t <= 0:
        raise InvalidSpecError(f"sigma_t must be positive, got {sigma_t}")
    x = 2.0 * np.asarray(times, dtype=np.float64) / sigma_t
    return fn(x, order)


def envelope_profile(spec: PulseSpec, grid: TimeGrid) -> np.ndarray:
    """Target temporal intensity of ``spec`` on the synthesis grid"""
    span = grid.t_max - grid.t_min
    if span < 4.0 * spec.sigma_t_seconds:
        raise InvalidSpecError(
            f"time grid spans {span:.3e} s, too short for sigma_t = {spec.sigma_t} ps"
        )
    return envelope_shape(spec.envelope, spec.order, spec.sigma_t_seconds, grid.times())
