"""
Service layer for pulseforge workflows
"""

from .dataset_service import DatasetService
from .run_service import RunService
from .analysis_service import AnalysisService, PlotBundle

__all__ = [
    'DatasetService',
    'RunService',
    'AnalysisService',
    'PlotBundle'
]
