"""
Latent-space analysis: PCA, Gaussian mixtures and quality metrics
"""

from .attribution import ComponentAttribution, attribute_components
from .gmm import (
    GmmModel, gaussian_w2, gmm_fit_em, gmm_log_likelihood, gmm_predict, gmm_responsibilities,
    normalized_pairwise_w2, pairwise_w2, sample_gmm, sqrtm_psd
)
from .metrics import (
    SNR_CAP_DB, distance_correlation, energy_correlation, mse, per_sample_mse, snr_db, snr_per_sample
)
from .pca import PcaModel, pca_baseline, pca_fit, pca_project, pca_reconstruct

__all__ = [
    'ComponentAttribution',
    'attribute_components',
    'GmmModel',
    'gaussian_w2',
    'gmm_fit_em',
    'gmm_log_likelihood',
    'gmm_predict',
    'gmm_responsibilities',
    'normalized_pairwise_w2',
    'pairwise_w2',
    'sample_gmm',
    'sqrtm_psd',
    'SNR_CAP_DB',
    'distance_correlation',
    'energy_correlation',
    'mse',
    'per_sample_mse',
    'snr_db',
    'snr_per_sample',
    'PcaModel',
    'pca_baseline',
    'pca_fit',
    'pca_project',
    'pca_reconstruct',
]
