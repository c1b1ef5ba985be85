"""
Repository for dataset directories (manifest.json + profiles.f32le)
"""

import logging
from pathlib import Path
from typing import Tuple

import numpy as np

from ...core.exceptions import ArtifactIOError, CorruptFileError, VersionMismatchError
from ..models import MANIFEST_VERSION, DatasetManifest
from .base import BaseRepository
from .files import PathLike

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
PROFILES_FILE = "profiles.f32le"
PROFILE_DTYPE = np.dtype("<f4")


class DatasetRepository(BaseRepository[DatasetManifest]):
    """Repository for stored intensity-profile datasets"""

    def __init__(self):
        super().__init__("dataset")

    def save(self, path: PathLike, manifest: DatasetManifest, profiles: np.ndarray) -> Path:
        """Write manifest and raw profiles; row i of ``profiles`` is record i"""
        directory = Path(path)
        n_points = manifest.output_grid.n_points
        if profiles.shape != (manifest.count, n_points):
            raise CorruptFileError(
                f"profiles have shape {profiles.shape}, manifest expects ({manifest.count}, {n_points})"
            )
        self.write_bytes(directory / PROFILES_FILE, np.ascontiguousarray(profiles, dtype=PROFILE_DTYPE).tobytes())
        self.write_json(directory / MANIFEST_FILE, manifest.model_dump(mode="json"))
        logger.info(f"Saved dataset with {manifest.count} profiles to {directory}")
        return directory

    def load_manifest(self, path: PathLike) -> DatasetManifest:
        directory = Path(path)
        if not directory.is_dir():
            raise ArtifactIOError(f"dataset directory not found: {directory}")
        data = self.read_json(directory / MANIFEST_FILE)
        if isinstance(data, dict) and data.get("version") != MANIFEST_VERSION:
            raise VersionMismatchError(
                f"manifest version {data.get('version')} is not supported (expected {MANIFEST_VERSION})"
            )
        return self._parse_model(DatasetManifest, data)

    def load_profiles(self, path: PathLike, manifest: DatasetManifest) -> np.ndarray:
        """Profiles as a float32 array [count, n_points]"""
        payload = self.read_bytes(Path(path) / PROFILES_FILE)
        expected = manifest.count * manifest.record_bytes
        if len(payload) != expected:
            raise CorruptFileError(
                f"{PROFILES_FILE} holds {len(payload)} bytes, manifest expects {expected}"
            )
        profiles = np.frombuffer(payload, dtype=PROFILE_DTYPE).astype(np.float32)
        return profiles.reshape(manifest.count, manifest.output_grid.n_points)

    def load(self, path: PathLike) -> Tuple[DatasetManifest, np.ndarray]:
        manifest = self.load_manifest(path)
        return manifest, self.load_profiles(path, manifest)
