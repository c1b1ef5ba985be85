"""
Pulse synthesis, propagation proxy, preprocessing and dataset generation
"""

from .dataset import (
    GenerationOptions, PulsePair, canonical_profiles, generate_dataset, generate_pair, simulate_pair
)
from .envelopes import envelope_profile, envelope_shape
from .preprocessing import centroid, measure_fwhm, measure_support, preprocess, pulse_energy
from .profiles import IntensityProfile, SpectralField
from .propagation import propagate_splitstep
from .sampling import derive_seed, dispersion_std, sample_pulse_spec
from .spectral import (
    spectral_energy, spectral_phase, synthesize_field, temporal_energy, temporal_field,
    to_intensity, to_spectrum, to_time
)

__all__ = [
    'GenerationOptions',
    'PulsePair',
    'canonical_profiles',
    'generate_dataset',
    'generate_pair',
    'simulate_pair',
    'envelope_profile',
    'envelope_shape',
    'centroid',
    'measure_fwhm',
    'measure_support',
    'preprocess',
    'pulse_energy',
    'IntensityProfile',
    'SpectralField',
    'propagate_splitstep',
    'derive_seed',
    'dispersion_std',
    'sample_pulse_spec',
    'spectral_energy',
    'spectral_phase',
    'synthesize_field',
    'temporal_energy',
    'temporal_field',
    'to_intensity',
    'to_spectrum',
    'to_time'
]
