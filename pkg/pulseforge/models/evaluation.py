"""
Held-out evaluation of a trained autoencoder
"""

import logging
from typing import Callable, Optional

import numpy as np

from ..core.exceptions import ShapeMismatchError, UndefinedCorrelationError
from ..data.models import AnalysisSettings, EvalReport
from ..latent.metrics import distance_correlation, energy_correlation, per_sample_mse, snr_per_sample
from ..latent.pca import pca_fit, pca_project
from .architecture import ModelParams, encode_mean, reconstruct

logger = logging.getLogger(__name__)

CHUNK = 256


def _chunked(fn: Callable[[np.ndarray], np.ndarray], data: np.ndarray) -> np.ndarray:
    return np.concatenate([fn(data[i:i + CHUNK]) for i in range(0, len(data), CHUNK)], axis=0)


def encode_all(params: ModelParams, data: np.ndarray) -> np.ndarray:
    return _chunked(lambda b: encode_mean(params, b), np.asarray(data, dtype=np.float64))


def reconstruct_all(params: ModelParams, data: np.ndarray) -> np.ndarray:
    return _chunked(lambda b: reconstruct(params, b), np.asarray(data, dtype=np.float64))


def report_from_reconstructions(
    originals: np.ndarray,
    reconstructions: np.ndarray,
    encoder: Callable[[np.ndarray], np.ndarray],
    settings: AnalysisSettings,
    seed: int = 0,
) -> EvalReport:
    """MSE, SNR and distance correlation of any encoder/reconstruction pair"""
    errors = per_sample_mse(originals, reconstructions)
    snr = snr_per_sample(originals, reconstructions, settings.snr_cap_db)
    cor, batches = distance_correlation(
        encoder, originals, settings.cor_batches, settings.cor_batch_size, seed
    )
    return EvalReport(
        mse=float(errors.mean()),
        snr_db=float(snr.mean()),
        cor=cor,
        per_sample_mse=errors.tolist(),
        details={"cor_batches": batches, "per_sample_snr_db": snr.tolist()},
    )


def evaluate_model(
    params: ModelParams,
    profiles: np.ndarray,
    settings: AnalysisSettings = AnalysisSettings(),
    energies: Optional[np.ndarray] = None,
    seed: int = 0,
) -> EvalReport:
    """
    Reconstruction MSE, mean SNR and distance correlation on ``profiles``.

    When ``energies`` are given, the report also carries the correlation between the
    leading principal coordinates of the codes and the pulse energies.
    """
    profiles = np.atleast_2d(np.asarray(profiles, dtype=np.float64))
    if profiles.shape[1] != params.arch.input_len:
        raise ShapeMismatchError(
            f"profiles have {profiles.shape[1]} samples, model expects {params.arch.input_len}"
        )
    report = report_from_reconstructions(
        profiles,
        reconstruct_all(params, profiles),
        lambda b: encode_mean(params, b),
        settings,
        seed,
    )
    if energies is not None:
        codes = encode_all(params, profiles)
        pca = pca_fit(codes)
        coords = pca_project(pca, codes, min(settings.pca_components, pca.dim))
        try:
            report.details["energy_correlation"] = energy_correlation(coords, energies).tolist()
        except UndefinedCorrelationError as e:
            logger.warning(f"Energy correlation skipped: {e}")
    logger.info(
        f"Evaluated {params.kind.value} on {len(profiles)} profiles: "
        f"MSE={report.mse:.6e} SNR={report.snr_db:.2f} dB cor={report.cor:.4f}"
    )
    return report
