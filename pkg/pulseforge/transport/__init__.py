"""
Optimal-transport view of intensity profiles
"""

from .density import (
    PICOSECONDS, EmissionDensity, bracket, density_graph, midpoint_levels, normalize_to_density,
    quantile, quantile_graph, support
)
from .geodesic import (
    GeodesicPath, ModelDecoder, ProfileDecoder, linear_interpolate, optimality_ratio,
    optimize_geodesic, path_length, path_length_graph, path_statistics
)
from .sampling import (
    EmissionFrame, EmissionHistogram, emission_histogram, histogram_l1, interpolate_emission_series,
    sample_emission_times, uniform_levels
)
from .wasserstein import N_QUAD, w2_1d, w2_graph

__all__ = [
    'PICOSECONDS',
    'EmissionDensity',
    'bracket',
    'density_graph',
    'midpoint_levels',
    'normalize_to_density',
    'quantile',
    'quantile_graph',
    'support',
    'GeodesicPath',
    'ModelDecoder',
    'ProfileDecoder',
    'path_statistics',
    'linear_interpolate',
    'optimality_ratio',
    'optimize_geodesic',
    'path_length',
    'path_length_graph',
    'EmissionFrame',
    'EmissionHistogram',
    'interpolate_emission_series',
    'emission_histogram',
    'histogram_l1',
    'sample_emission_times',
    'uniform_levels',
    'N_QUAD',
    'w2_1d',
    'w2_graph',
]
