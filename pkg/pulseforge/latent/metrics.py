"""
Reconstruction quality and latent geometry metrics
"""

import logging
from typing import Callable, List, Tuple

import numpy as np
from scipy.spatial.distance import pdist
from scipy.stats import pearsonr

from ..core.exceptions import ShapeMismatchError, UndefinedCorrelationError, UndefinedRatioError, UsageError

logger = logging.getLogger(__name__)

SNR_CAP_DB = 300.0

Encoder = Callable[[np.ndarray], np.ndarray]


def _paired(originals: np.ndarray, reconstructions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = np.atleast_2d(np.asarray(originals, dtype=np.float64))
    y = np.atleast_2d(np.asarray(reconstructions, dtype=np.float64))
    if x.shape != y.shape:
        raise ShapeMismatchError(f"originals {x.shape} and reconstructions {y.shape} differ in shape")
    return x, y


def per_sample_mse(originals: np.ndarray, reconstructions: np.ndarray) -> np.ndarray:
    x, y = _paired(originals, reconstructions)
    return np.mean((x - y) ** 2, axis=1)


def mse(originals: np.ndarray, reconstructions: np.ndarray) -> float:
    x, y = _paired(originals, reconstructions)
    return float(np.mean((x - y) ** 2))


def snr_per_sample(
    originals: np.ndarray, reconstructions: np.ndarray, cap_db: float = SNR_CAP_DB
) -> np.ndarray:
    """10 log10(||x||^2 / ||x - x_hat||^2), exact reconstructions reported as ``cap_db``"""
    x, y = _paired(originals, reconstructions)
    signal = np.sum(x * x, axis=1)
    if np.any(signal <= 0):
        raise UndefinedRatioError("signal-to-noise ratio of an all-zero profile")
    noise = np.sum((x - y) ** 2, axis=1)
    exact = noise <= 0
    if np.any(exact):
        logger.debug(f"{int(exact.sum())} exact reconstructions reported at the {cap_db} dB cap")
    with np.errstate(divide="ignore"):
        ratios = 10.0 * np.log10(signal / np.where(exact, 1.0, noise))
    return np.where(exact, cap_db, np.minimum(ratios, cap_db))


def snr_db(originals: np.ndarray, reconstructions: np.ndarray, cap_db: float = SNR_CAP_DB) -> float:
    """Mean per-sample SNR in decibels"""
    return float(np.mean(snr_per_sample(originals, reconstructions, cap_db)))


def distance_correlation(
    encoder: Encoder,
    data: np.ndarray,
    n_batches: int = 50,
    batch_size: int = 128,
    seed: int = 0,
) -> Tuple[float, List[float]]:
    """
    Pearson correlation of pairwise Euclidean distances in data space and code space,
    averaged over random batches. Batches whose distances have zero variance are skipped.
    """
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    size = min(batch_size, len(data))
    if size < 3:
        raise UsageError(f"distance correlation needs batches of at least 3 profiles, got {size}")
    rng = np.random.default_rng(seed)
    values: List[float] = []
    for b in range(n_batches):
        chosen = rng.choice(len(data), size=size, replace=False)
        batch = data[chosen]
        codes = np.atleast_2d(np.asarray(encoder(batch), dtype=np.float64))
        if len(codes) != size:
            raise ShapeMismatchError(f"encoder returned {len(codes)} codes for {size} profiles")
        data_dist, code_dist = pdist(batch), pdist(codes)
        if np.std(data_dist) == 0 or np.std(code_dist) == 0:
            logger.warning(f"Skipping distance-correlation batch {b}: zero-variance distances")
            continue
        values.append(float(np.clip(pearsonr(data_dist, code_dist)[0], -1.0, 1.0)))
    if not values:
        raise UndefinedCorrelationError("every batch had zero-variance distances")
    return float(np.mean(values)), values


def energy_correlation(coordinates: np.ndarray, energies: np.ndarray) -> np.ndarray:
    """Pearson r between each coordinate column and the pulse energies"""
    coordinates = np.atleast_2d(np.asarray(coordinates, dtype=np.float64))
    energies = np.asarray(energies, dtype=np.float64)
    if coordinates.shape[0] != energies.shape[0]:
        raise ShapeMismatchError(
            f"{coordinates.shape[0]} coordinate rows but {energies.shape[0]} energies"
        )
    if coordinates.shape[0] < 2 or np.std(energies) == 0:
        raise UndefinedCorrelationError("energies have zero variance")
    result = np.empty(coordinates.shape[1])
    for k in range(coordinates.shape[1]):
        column = coordinates[:, k]
        if np.std(column) == 0:
            raise UndefinedCorrelationError(f"coordinate {k} has zero variance")
        result[k] = pearsonr(column, energies)[0]
    return np.clip(result, -1.0, 1.0)
