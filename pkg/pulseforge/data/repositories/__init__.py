"""
Repository layer for artifact files
"""

from .files import FileOperations
from .base import BaseRepository
from .dataset_repository import DatasetRepository
from .checkpoint_repository import CheckpointRepository
from .export_repository import ExportRepository
from .run_repository import RunRepository

__all__ = [
    'FileOperations',
    'BaseRepository',
    'DatasetRepository',
    'CheckpointRepository',
    'ExportRepository',
    'RunRepository'
]
