"""
Split-step stand-in for the fiber front end
"""

import logging

import numpy as np

from ..core.exceptions import DivergenceError
from ..data.models import FiberProxyParams
from .profiles import SpectralField
from .spectral import to_spectrum, to_time

logger = logging.getLogger(__name__)


def propagate_splitstep(field: SpectralField, params: FiberProxyParams) -> SpectralField:
    """Symmetric split-step evolution: half dispersion, nonlinear phase, half dispersion"""
    grid = field.grid
    delta_t = field.time_grid.delta_t
    h = params.length / params.n_steps
    detuning = grid.detuning()
    half_dispersion = np.exp(0.5j * params.beta2 * detuning * detuning * (0.5 * h))

    spectrum = np.array(field.values, dtype=np.complex128, copy=True)
    for step in range(params.n_steps):
        spectrum *= half_dispersion
        e = to_time(spectrum, delta_t)
        e *= np.exp(1j * params.gamma_nl * (e.real * e.real + e.imag * e.imag) * h)
        spectrum = to_spectrum(e, delta_t)
        spectrum *= half_dispersion
        if not np.all(np.isfinite(spectrum)):
            raise DivergenceError("split-step propagation produced non-finite field", step=step)

    logger.debug(f"Propagated field over {params.length} m in {params.n_steps} steps")
    return SpectralField(grid, spectrum)
