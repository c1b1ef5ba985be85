"""
Minibatch Adam training of the autoencoders
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core.exceptions import DivergenceError, UsageError
from ..data.models import ArchConfig, ModelKind, TrainConfig, TrainHistory
from ..diffcore import AdamState, Tape, adam_step, constant, gradients
from .architecture import ModelParams, as_constants, init_params, update_running_stats
from .losses import objective

logger = logging.getLogger(__name__)

EpochCallback = Callable[[int, TrainHistory], None]


@dataclass(frozen=True)
class DataSplit:
    """Index sets of the deterministic train/test split"""
    train: np.ndarray
    test: np.ndarray

    def as_dict(self) -> Dict[str, List[int]]:
        return {"train": self.train.tolist(), "test": self.test.tolist()}


@dataclass(frozen=True)
class TrainResult:
    params: ModelParams
    history: TrainHistory
    split: DataSplit


def split_indices(n: int, split_ratio: float, seed: int) -> DataSplit:
    """Seeded shuffle, first ``split_ratio`` share for training"""
    if n < 2:
        raise UsageError(f"need at least two profiles to split, got {n}")
    order = np.random.default_rng([seed, 0]).permutation(n)
    n_train = min(max(int(round(split_ratio * n)), 1), n - 1)
    return DataSplit(train=np.sort(order[:n_train]), test=np.sort(order[n_train:]))


def _batches(indices: np.ndarray, batch_size: int, rng: np.random.Generator) -> List[np.ndarray]:
    shuffled = rng.permutation(indices)
    batches = [shuffled[i:i + batch_size] for i in range(0, len(shuffled), batch_size)]
    return [b for b in batches if len(b) >= 2]


def evaluate_loss(
    params: ModelParams,
    profiles: np.ndarray,
    config: TrainConfig,
    seed: int,
) -> float:
    """Objective on ``profiles`` in eval mode with a fixed prior draw; NaN when it is undefined"""
    too_small_for_mmd = params.kind is ModelKind.WAE and config.lambda_mmd != 0 and len(profiles) < 2
    if len(profiles) == 0 or too_small_for_mmd:
        return float("nan")
    rng = np.random.default_rng([config.seed, seed])
    loss, _ = objective(params, as_constants(params), constant(profiles), rng, config, training=False)
    return loss.item()


def train_step(
    params: ModelParams,
    state: AdamState,
    batch: np.ndarray,
    rng: np.random.Generator,
    config: TrainConfig,
    epoch: Optional[int] = None,
    step: Optional[int] = None,
) -> Tuple[ModelParams, Dict[str, float]]:
    """One Adam update on ``batch``; returns the new parameters and the loss parts"""
    tape = Tape()
    names = list(params.weights)
    leaves = [tape.watch(params.weights[name]) for name in names]
    weights = dict(zip(names, leaves))
    stats: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}
    loss, parts = objective(params, weights, constant(batch), rng, config, training=True, stats=stats)
    if not np.isfinite(parts["loss"]):
        raise DivergenceError("training loss is not finite", epoch=epoch, step=step)
    grads = gradients(tape, loss, leaves)
    updated = adam_step(state, [params.weights[name] for name in names], grads)
    params = params.with_weights(dict(zip(names, updated)))
    return update_running_stats(params, stats), parts


def train(
    profiles: np.ndarray,
    arch: ArchConfig,
    config: TrainConfig,
    params: Optional[ModelParams] = None,
    on_epoch: Optional[EpochCallback] = None,
) -> TrainResult:
    """Train on the seeded 80:20 split of ``profiles``; the dataset is never modified"""
    profiles = np.asarray(profiles, dtype=np.float64)
    if profiles.ndim != 2 or profiles.shape[1] != arch.input_len:
        raise UsageError(f"profiles must have shape [n, {arch.input_len}], got {profiles.shape}")
    split = split_indices(len(profiles), config.split_ratio, config.seed)
    if len(split.train) < config.batch_size:
        raise UsageError(
            f"training split has {len(split.train)} profiles, fewer than one batch of {config.batch_size}"
        )

    if params is None:
        params = init_params(arch, config.model_kind, seed=config.seed, beta=config.beta)
    state = AdamState.for_params(list(params.weights.values()), lr=config.lr)
    shuffle_rng = np.random.default_rng([config.seed, 2])
    prior_rng = np.random.default_rng([config.seed, 3])
    history = TrainHistory()
    train_data, test_data = profiles[split.train], profiles[split.test]

    logger.info(
        f"Training {config.model_kind.value} on {len(split.train)} profiles "
        f"({len(split.test)} held out) for {config.epochs} epochs"
    )
    for epoch in range(config.epochs):
        totals = {"loss": 0.0, "reconstruction": 0.0, "regularizer": 0.0}
        seen = 0
        for step, batch_idx in enumerate(_batches(np.arange(len(train_data)), config.batch_size, shuffle_rng)):
            params, parts = train_step(
                params, state, train_data[batch_idx], prior_rng, config, epoch=epoch, step=step
            )
            for key in totals:
                totals[key] += parts[key] * len(batch_idx)
            seen += len(batch_idx)

        val = evaluate_loss(params, test_data, config, seed=4)
        history.append(
            totals["loss"] / seen,
            totals["reconstruction"] / seen,
            totals["regularizer"] / seen,
            val,
        )
        logger.info(
            f"Epoch {epoch + 1}/{config.epochs}: loss={history.train_loss[-1]:.6f} "
            f"recon={history.reconstruction[-1]:.6f} reg={history.regularizer[-1]:.6f} val={val:.6f}"
        )
        if on_epoch is not None:
            on_epoch(epoch, history)

    return TrainResult(params=params, history=history, split=split)
