"""
Side-by-side comparison of the WAE, beta-VAEs and a PCA baseline
"""

import logging
from typing import Dict, Optional, Sequence

import numpy as np

from ..data.models import BETA_GRID, AnalysisSettings, ArchConfig, EvalReport, ModelKind, TrainConfig
from ..latent.pca import pca_baseline, pca_project
from .evaluation import evaluate_model, report_from_reconstructions
from .trainer import split_indices, train

logger = logging.getLogger(__name__)


def model_label(kind: ModelKind, beta: float) -> str:
    return "wae" if kind is ModelKind.WAE else f"bvae-{beta:g}"


def compare_models(
    profiles: np.ndarray,
    arch: ArchConfig,
    config: TrainConfig,
    betas: Sequence[float] = BETA_GRID,
    settings: AnalysisSettings = AnalysisSettings(),
    pca_components: Optional[int] = None,
) -> Dict[str, EvalReport]:
    """
    Train every model on the same split and report held-out metrics.

    The PCA baseline keeps as many components as the latent dimension unless told otherwise.
    """
    profiles = np.asarray(profiles, dtype=np.float64)
    split = split_indices(len(profiles), config.split_ratio, config.seed)
    test = profiles[split.test]
    reports: Dict[str, EvalReport] = {}

    runs = [(ModelKind.WAE, config.beta)] + [(ModelKind.BETA_VAE, beta) for beta in betas]
    for kind, beta in runs:
        label = model_label(kind, beta)
        logger.info(f"Comparison run {label}")
        result = train(profiles, arch, config.model_copy(update={"model_kind": kind, "beta": beta}))
        reports[label] = evaluate_model(result.params, test, settings, seed=config.seed)

    k = pca_components or arch.latent_dim
    pca, reconstructions = pca_baseline(profiles[split.train], test, k)
    k = min(k, pca.dim)
    reports[f"pca-{k}"] = report_from_reconstructions(
        test, reconstructions, lambda b: pca_project(pca, b, k), settings, seed=config.seed
    )
    return reports
