"""
Business logic service for training runs and their bookkeeping
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from ... import __version__
from ...core.exceptions import InconsistentArtifactError
from ...models.architecture import ModelParams
from ...models.checkpoint import checkpoint_summary, load_model, save_model
from ...models.trainer import TrainResult
from ..models import ArchConfig, RunConfig, TrainConfig, TrainSummary
from ..repositories import RunRepository
from ..repositories.run_repository import CHECKPOINT_FILE, RUN_CONFIG_FILE
from ..validation import DataValidator

logger = logging.getLogger(__name__)


class RunService:
    """Service for run directories: provenance, checkpoints, histories and splits"""

    def __init__(self):
        self.repository = RunRepository()

    def record(
        self,
        out: Union[str, Path],
        command: str,
        master_seed: int = 0,
        inputs: Optional[Dict[str, str]] = None,
        params: Optional[Dict[str, Any]] = None,
        name: str = RUN_CONFIG_FILE,
    ) -> RunConfig:
        """Write the resolved configuration of one command next to its outputs"""
        config = RunConfig(
            command=command,
            version=__version__,
            master_seed=master_seed,
            inputs={k: str(v) for k, v in (inputs or {}).items()},
            output=str(out),
            params=params or {},
        )
        self.repository.save_config(out, config, name)
        return config

    def save_training(
        self,
        out: Union[str, Path],
        result: TrainResult,
        config: TrainConfig,
    ) -> Path:
        """Checkpoint, per-epoch history and split of a finished run"""
        history = result.history
        summary = TrainSummary(
            epochs_run=history.epochs,
            final_train_loss=history.train_loss[-1] if history.epochs else None,
            final_val_loss=history.val_loss[-1] if history.epochs else None,
            test_indices=result.split.test.tolist(),
        )
        directory = Path(out)
        save_model(result.params, directory / CHECKPOINT_FILE, config, summary)
        self.repository.save_history(directory, history)
        self.repository.save_split(directory, result.split.as_dict())
        logger.info(f"Saved run with {history.epochs} epoch(s) to {directory}")
        return directory

    def load_model(self, path: Union[str, Path], expected_arch: Optional[ArchConfig] = None) -> ModelParams:
        return load_model(self.repository.checkpoint_path(path), expected_arch)

    def held_out(self, params: ModelParams, count: int) -> np.ndarray:
        """Test indices recorded at training time, checked against the dataset size"""
        indices = checkpoint_summary(params).test_indices
        errors = DataValidator.validate_split(indices, count)
        if errors:
            raise InconsistentArtifactError(f"Validation errors: {', '.join(errors)}")
        return np.asarray(indices, dtype=np.int64)

    def load_config(self, run: Union[str, Path], name: str = RUN_CONFIG_FILE) -> RunConfig:
        return self.repository.load_config(run, name)
