"""
Spectral synthesis: envelope to E(omega), phase polynomial, back to intensity
"""

import math

import numpy as np
from scipy.fft import fft, fftshift, ifft, ifftshift

from ..data.models import FrequencyGrid, PulseSpec
from .envelopes import envelope_profile
from .profiles import SpectralField


def to_spectrum(amplitude: np.ndarray, delta_t: float) -> np.ndarray:
    """Centered temporal samples to centered spectral samples, scaled by delta_t"""
    return fftshift(fft(ifftshift(amplitude))) * delta_t


def to_time(spectrum: np.ndarray, delta_t: float) -> np.ndarray:
    """Inverse of to_spectrum"""
    return fftshift(ifft(ifftshift(spectrum))) / delta_t


def spectral_phase(spec: PulseSpec, grid: FrequencyGrid) -> np.ndarray:
    """phi(omega) = phi2 D^2 / 2 + phi3 D^3 / 6 + phi4 D^4 / 24 with D = omega - omega0"""
    detuning = grid.detuning() + (grid.omega0 - spec.omega0)
    d2 = detuning * detuning
    return 0.5 * spec.phi2 * d2 + spec.phi3 * d2 * detuning / 6.0 + spec.phi4 * d2 * d2 / 24.0


def synthesize_field(spec: PulseSpec, grid: FrequencyGrid) -> SpectralField:
    """E(omega) = A(omega) exp(i phi(omega)) with A the transform of the envelope amplitude"""
    time_grid = grid.synthesis_grid()
    amplitude = np.sqrt(envelope_profile(spec, time_grid))
    envelope_spectrum = to_spectrum(amplitude, time_grid.delta_t)
    return SpectralField(grid, envelope_spectrum * np.exp(1j * spectral_phase(spec, grid)))


def temporal_field(field: SpectralField) -> np.ndarray:
    return to_time(field.values, field.time_grid.delta_t)


def to_intensity(field: SpectralField) -> np.ndarray:
    """I(t) = |E(t)|^2 on the synthesis grid"""
    e = temporal_field(field)
    return (e.real * e.real + e.imag * e.imag).astype(np.float64)


def spectral_energy(field: SpectralField) -> float:
    """(1 / 2 pi) sum |E(omega)|^2 delta_omega"""
    return float(np.sum(np.abs(field.values) ** 2) * field.grid.delta_omega / (2.0 * math.pi))


def temporal_energy(intensity: np.ndarray, delta_t: float) -> float:
    return float(np.sum(intensity) * delta_t)
