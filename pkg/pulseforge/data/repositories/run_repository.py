"""
Repository for run directories (resolved config, split, history, GMM)
"""

import logging
from pathlib import Path
from typing import Any, Dict, List

from ...core.exceptions import InconsistentArtifactError
from ..models import RunConfig, TrainHistory
from .base import BaseRepository
from .export_repository import ExportRepository
from .files import PathLike

logger = logging.getLogger(__name__)

RUN_CONFIG_FILE = "run_config.json"
SPLIT_FILE = "split.json"
HISTORY_FILE = "history.csv"
CHECKPOINT_FILE = "model.pfwm"
GMM_FILE = "gmm.json"

HISTORY_COLUMNS = ["epoch", "train_loss", "reconstruction", "regularizer", "val_loss"]


class RunRepository(BaseRepository[RunConfig]):
    """Repository for the bookkeeping files every command writes next to its outputs"""

    def __init__(self):
        super().__init__("run")
        self.exports = ExportRepository()

    def save_config(self, directory: PathLike, config: RunConfig, name: str = RUN_CONFIG_FILE) -> Path:
        path = Path(directory) / name
        self.write_json(path, config.model_dump(mode="json"))
        return path

    def load_config(self, directory: PathLike, name: str = RUN_CONFIG_FILE) -> RunConfig:
        return self._parse_model(RunConfig, self.read_json(Path(directory) / name))

    def save_split(self, directory: PathLike, split: Dict[str, List[int]]) -> Path:
        path = Path(directory) / SPLIT_FILE
        self.write_json(path, split)
        return path

    def load_split(self, directory: PathLike) -> Dict[str, List[int]]:
        data = self.read_json(Path(directory) / SPLIT_FILE)
        if not isinstance(data, dict) or "test" not in data:
            raise InconsistentArtifactError(f"{SPLIT_FILE} in {directory} has no held-out indices")
        return {key: [int(i) for i in value] for key, value in data.items()}

    def save_history(self, directory: PathLike, history: TrainHistory) -> Path:
        path = Path(directory) / HISTORY_FILE
        rows = zip(
            range(1, history.epochs + 1),
            history.train_loss,
            history.reconstruction,
            history.regularizer,
            history.val_loss,
        )
        self.exports.write_csv(path, HISTORY_COLUMNS, rows)
        return path

    def load_history(self, directory: PathLike) -> TrainHistory:
        history = TrainHistory()
        for row in self.exports.read_csv(Path(directory) / HISTORY_FILE):
            history.append(
                float(row["train_loss"]),
                float(row["reconstruction"]),
                float(row["regularizer"]),
                float(row["val_loss"]),
            )
        return history

    def save_document(self, path: PathLike, document: Any) -> Path:
        self.write_json(path, document)
        logger.debug(f"Saved {self.artifact_name} document {path}")
        return Path(path)

    def checkpoint_path(self, path: PathLike) -> Path:
        """Accept either a checkpoint file or a run directory holding one"""
        path = Path(path)
        return path / CHECKPOINT_FILE if path.is_dir() else path
