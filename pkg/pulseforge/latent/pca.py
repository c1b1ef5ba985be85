"""
Principal component analysis of latent codes
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from ..core.exceptions import ShapeMismatchError, UsageError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PcaModel:
    """Mean, orthonormal axes (columns) and descending explained variances"""
    mean: np.ndarray
    axes: np.ndarray
    variances: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    def explained_ratio(self) -> np.ndarray:
        total = float(np.sum(self.variances))
        return self.variances / total if total > 0 else np.zeros_like(self.variances)


def _as_matrix(codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.float64)
    if codes.ndim != 2:
        raise ShapeMismatchError(f"expected a [n, d] matrix, got shape {codes.shape}")
    return codes


def pca_fit(codes: np.ndarray) -> PcaModel:
    """Eigendecomposition of the sample covariance; largest-magnitude entry of each axis positive"""
    codes = _as_matrix(codes)
    n, d = codes.shape
    if n < 2:
        raise ShapeMismatchError("PCA needs at least two samples")
    if n < d + 1:
        logger.warning(f"PCA on {n} samples in {d} dimensions; trailing variances are zero")
    mean = codes.mean(axis=0)
    covariance = np.atleast_2d(np.cov(codes, rowvar=False))
    eigenvalues, eigenvectors = linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1]
    variances = np.maximum(eigenvalues[order], 0.0)
    axes = eigenvectors[:, order]
    pivots = np.argmax(np.abs(axes), axis=0)
    signs = np.sign(axes[pivots, np.arange(d)])
    signs[signs == 0] = 1.0
    return PcaModel(mean=mean, axes=axes * signs, variances=variances)


def _check_k(model: PcaModel, k: int) -> None:
    if not 1 <= k <= model.dim:
        raise UsageError(f"number of components must lie in [1, {model.dim}], got {k}")


def pca_project(model: PcaModel, codes: np.ndarray, k: int) -> np.ndarray:
    """Coordinates [n, k] on the leading axes"""
    _check_k(model, k)
    codes = _as_matrix(codes)
    if codes.shape[1] != model.dim:
        raise ShapeMismatchError(f"codes have {codes.shape[1]} columns, model expects {model.dim}")
    return (codes - model.mean) @ model.axes[:, :k]


def pca_reconstruct(model: PcaModel, codes: np.ndarray, k: int) -> np.ndarray:
    """Back-projection from the leading ``k`` coordinates"""
    coords = pca_project(model, codes, k)
    return model.mean + coords @ model.axes[:, :k].T


def pca_baseline(train: np.ndarray, test: np.ndarray, k: int) -> Tuple[PcaModel, np.ndarray]:
    """Linear reconstruction baseline: fit on ``train``, reconstruct ``test`` with ``k`` components"""
    model = pca_fit(train)
    return model, pca_reconstruct(model, test, min(k, model.dim))
