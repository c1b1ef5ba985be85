"""
Data models for pulse shaping, training and analysis
"""

from .pulse_models import (
    GAUSSIAN_ORDERS, PICOSECOND, SIGMA_T_RANGE_PS, TRIANGULAR_ORDERS,
    DispersionUnit, EnvelopeFamily, FiberProxyParams, FrequencyGrid,
    ProfileTag, PulseSpec, TimeGrid
)
from .training_models import (
    BETA_GRID, DEFAULT_IMQ_SCALES, ArchConfig, ModelKind, TrainConfig,
    TrainHistory, TrainSummary
)
from .analysis_models import AnalysisSettings, EvalReport, GeodesicSettings, SamplingSettings
from .dataset_models import MANIFEST_VERSION, DatasetManifest, DatasetRecord
from .run_models import RunConfig

__all__ = [
    'GAUSSIAN_ORDERS',
    'PICOSECOND',
    'SIGMA_T_RANGE_PS',
    'TRIANGULAR_ORDERS',
    'DispersionUnit',
    'EnvelopeFamily',
    'FiberProxyParams',
    'FrequencyGrid',
    'ProfileTag',
    'PulseSpec',
    'TimeGrid',
    'BETA_GRID',
    'DEFAULT_IMQ_SCALES',
    'ArchConfig',
    'ModelKind',
    'TrainConfig',
    'TrainHistory',
    'TrainSummary',
    'AnalysisSettings',
    'EvalReport',
    'GeodesicSettings',
    'SamplingSettings',
    'MANIFEST_VERSION',
    'DatasetManifest',
    'DatasetRecord',
    'RunConfig'
]
