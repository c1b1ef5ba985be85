"""
Model checkpoint save/load on top of the PFWM repository
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import ValidationError

from ..core.exceptions import CorruptFileError, InconsistentArtifactError
from ..data.models import ArchConfig, ModelKind, TrainConfig, TrainSummary
from ..data.repositories import CheckpointRepository
from .architecture import ModelParams, parameter_shapes

logger = logging.getLogger(__name__)

WEIGHT_PREFIX = "weight/"
BUFFER_PREFIX = "buffer/"


def save_model(
    params: ModelParams,
    path: Union[str, Path],
    train_config: Optional[TrainConfig] = None,
    summary: Optional[TrainSummary] = None,
    repository: Optional[CheckpointRepository] = None,
) -> None:
    """Write ``params`` with its architecture, training config and final metrics"""
    repository = repository or CheckpointRepository()
    header: Dict[str, Any] = {
        "arch": params.arch.model_dump(mode="json"),
        "kind": params.kind.value,
        "beta": params.beta,
        "train_config": train_config.model_dump(mode="json") if train_config else None,
        "summary": (summary or TrainSummary()).model_dump(mode="json"),
    }
    tensors = [(WEIGHT_PREFIX + name, w) for name, w in params.weights.items()]
    tensors += [(BUFFER_PREFIX + name, b) for name, b in params.buffers.items()]
    repository.save(path, header, tensors)


def load_model(
    path: Union[str, Path],
    expected_arch: Optional[ArchConfig] = None,
    repository: Optional[CheckpointRepository] = None,
) -> ModelParams:
    """Read a checkpoint; header and tensor table must agree with the recorded architecture"""
    repository = repository or CheckpointRepository()
    header, tensors = repository.load(path)
    try:
        arch = ArchConfig.model_validate(header["arch"])
        kind = ModelKind(header["kind"])
        summary = TrainSummary.model_validate(header.get("summary") or {})
        train_config = (
            TrainConfig.model_validate(header["train_config"]) if header.get("train_config") else None
        )
    except (KeyError, ValueError, ValidationError) as e:
        raise CorruptFileError(f"checkpoint header is invalid: {e}") from e

    if expected_arch is not None and expected_arch != arch:
        raise InconsistentArtifactError(
            f"checkpoint architecture {arch.model_dump()} differs from the expected {expected_arch.model_dump()}"
        )

    weight_shapes, buffer_shapes = parameter_shapes(arch, kind)
    weights: Dict[str, np.ndarray] = {}
    buffers: Dict[str, np.ndarray] = {}
    for names, prefix, target in (
        (weight_shapes, WEIGHT_PREFIX, weights),
        (buffer_shapes, BUFFER_PREFIX, buffers),
    ):
        for name, shape in names.items():
            array = tensors.get(prefix + name)
            if array is None or array.shape != shape:
                raise InconsistentArtifactError(
                    f"checkpoint tensor {name} is missing or does not match the architecture"
                )
            target[name] = array
    if len(tensors) != len(weights) + len(buffers):
        raise InconsistentArtifactError("checkpoint holds tensors the architecture does not use")

    logger.info(f"Loaded {kind.value} checkpoint from {path}")
    return ModelParams(
        arch=arch,
        kind=kind,
        weights=weights,
        buffers=buffers,
        beta=float(header.get("beta", 1.0)),
        metadata={"summary": summary, "train_config": train_config},
    )


def checkpoint_summary(params: ModelParams) -> TrainSummary:
    summary = params.metadata.get("summary")
    return summary if isinstance(summary, TrainSummary) else TrainSummary()
