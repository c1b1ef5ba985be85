"""
Business logic service for pulse datasets
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from ...core.exceptions import UsageError
from ...pulsegen.dataset import GenerationOptions, generate_dataset
from ..models import DatasetManifest, FiberProxyParams, ProfileTag
from ..repositories import DatasetRepository
from ..validation import DataValidator

logger = logging.getLogger(__name__)


class DatasetService:
    """Service for generating and reading stored profile datasets"""

    def __init__(self):
        self.repository = DatasetRepository()

    def generate(
        self,
        pairs: int,
        seed: int,
        out: Union[str, Path],
        fiber: FiberProxyParams = FiberProxyParams(),
        options: GenerationOptions = GenerationOptions(),
        threads: int = 1,
    ) -> DatasetManifest:
        """Generate a dataset with validation"""
        errors = DataValidator.validate_generate_request(pairs, seed, threads)
        if errors:
            raise UsageError(f"Validation errors: {', '.join(errors)}")
        return generate_dataset(pairs, seed, fiber, out, options, threads, self.repository)

    def load(self, path: Union[str, Path]) -> Tuple[DatasetManifest, np.ndarray]:
        """Manifest and float64 profiles [count, n_points]"""
        manifest, profiles = self.repository.load(path)
        logger.info(f"Loaded dataset {path} with {manifest.count} profiles")
        return manifest, profiles.astype(np.float64)

    def energies(self, manifest: DatasetManifest) -> np.ndarray:
        return np.array([r.energy_normalized for r in manifest.records], dtype=np.float64)

    def families(self, manifest: DatasetManifest) -> List[str]:
        return [r.family for r in manifest.records]

    def tags(self, manifest: DatasetManifest) -> List[ProfileTag]:
        return [r.tag for r in manifest.records]

    def summary(self, manifest: DatasetManifest) -> dict:
        """Counts per family and tag for the CLI"""
        by_family: dict = {}
        for record in manifest.records:
            by_family[record.family] = by_family.get(record.family, 0) + 1
        return {
            "count": manifest.count,
            "pairs": manifest.pairs,
            "master_seed": manifest.master_seed,
            "energy_max": manifest.energy_max,
            "families": dict(sorted(by_family.items())),
            "resampled_pairs": len({r.pair for r in manifest.records if r.attempts > 1}),
        }
