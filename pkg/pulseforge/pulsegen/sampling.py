"""
Seeded sampling of pulse shaping parameters
"""

import math
from typing import Tuple

import numpy as np

from ..data.models import PICOSECOND, SIGMA_T_RANGE_PS, DispersionUnit, EnvelopeFamily, PulseSpec

FAMILIES: Tuple[EnvelopeFamily, ...] = tuple(EnvelopeFamily)

# variance numerators of phi2, phi3, phi4
DISPERSION_NUMERATORS = (100.0 / 3.0, 100.0 / 3.0, 400.0 / 3.0)


def derive_seed(rng_seed: int, index: int, attempt: int = 0) -> int:
    """Sub-seed for one (master seed, index, attempt) triple"""
    sequence = np.random.SeedSequence(entropy=(int(rng_seed), int(index), int(attempt)))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def dispersion_std(
    sigma_t: float,
    unit: DispersionUnit = DispersionUnit.PICOSECONDS,
) -> Tuple[float, float, float]:
    """Standard deviations of phi2, phi3, phi4 in s^2, s^3, s^4 for sigma_t in ps"""
    if DispersionUnit(unit) is DispersionUnit.SECONDS:
        sigma, scale = sigma_t * PICOSECOND, 1.0
    else:
        sigma, scale = sigma_t, PICOSECOND
    std2, std3, std4 = (
        math.sqrt(num / sigma ** n) * scale ** n
        for num, n in zip(DISPERSION_NUMERATORS, (2, 3, 4))
    )
    return std2, std3, std4


def sample_pulse_spec(
    rng_seed: int,
    index: int,
    attempt: int = 0,
    unit: DispersionUnit = DispersionUnit.PICOSECONDS,
    lambda0: float = 1030e-9,
) -> PulseSpec:
    """Draw the shaping parameters of pulse ``index``; pure in its arguments"""
    seed = derive_seed(rng_seed, index, attempt)
    rng = np.random.default_rng(seed)

    envelope = FAMILIES[int(rng.integers(len(FAMILIES)))]
    orders = envelope.orders
    order = orders[int(rng.integers(len(orders)))]
    lo, hi = SIGMA_T_RANGE_PS
    sigma_t = float(rng.uniform(lo, hi))
    std2, std3, std4 = dispersion_std(sigma_t, unit)
    phi2, phi3, phi4 = rng.normal(0.0, 1.0, size=3) * np.array([std2, std3, std4])

    return PulseSpec(
        envelope=envelope,
        order=order,
        sigma_t=min(max(sigma_t, lo), hi),
        phi2=float(phi2),
        phi3=float(phi3),
        phi4=float(phi4),
        lambda0=lambda0,
        seed=seed,
    )
