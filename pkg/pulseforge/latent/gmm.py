"""
Gaussian mixtures fitted by expectation-maximization, and their Wasserstein geometry
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.special import logsumexp

from ..core.exceptions import (
    DegenerateNormalizationError, InvalidCovarianceError, ShapeMismatchError, UsageError
)

logger = logging.getLogger(__name__)

EMPTY_COMPONENT = 1e-8
PSD_TOLERANCE = 1e-10


@dataclass(frozen=True)
class GmmModel:
    """Weights [K], means [K, d], full covariances [K, d, d]"""
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    log_likelihoods: List[float] = field(default_factory=list, compare=False)
    converged: bool = False

    @property
    def n_components(self) -> int:
        return int(self.weights.shape[0])

    @property
    def dim(self) -> int:
        return int(self.means.shape[1])

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "means": self.means.tolist(),
            "covariances": self.covariances.tolist(),
            "log_likelihoods": list(self.log_likelihoods),
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GmmModel":
        weights = np.asarray(data["weights"], dtype=np.float64)
        means = np.atleast_2d(np.asarray(data["means"], dtype=np.float64))
        covariances = np.asarray(data["covariances"], dtype=np.float64)
        k, d = means.shape
        if weights.shape != (k,) or covariances.shape != (k, d, d):
            raise ShapeMismatchError("mixture parameters have inconsistent shapes")
        return cls(
            weights=weights,
            means=means,
            covariances=covariances,
            log_likelihoods=[float(v) for v in data.get("log_likelihoods", [])],
            converged=bool(data.get("converged", False)),
        )


def _log_gaussian(x: np.ndarray, mean: np.ndarray, covariance: np.ndarray) -> np.ndarray:
    try:
        chol = linalg.cholesky(covariance, lower=True)
    except linalg.LinAlgError as e:
        raise InvalidCovarianceError(f"covariance is not positive definite: {e}") from e
    y = linalg.solve_triangular(chol, (x - mean).T, lower=True)
    log_det = 2.0 * np.sum(np.log(np.diag(chol)))
    return -0.5 * (x.shape[1] * math.log(2.0 * math.pi) + log_det + np.sum(y * y, axis=0))


def _log_joint(gmm: GmmModel, x: np.ndarray) -> np.ndarray:
    columns = [
        math.log(w) + _log_gaussian(x, m, c) if w > 0 else np.full(len(x), -np.inf)
        for w, m, c in zip(gmm.weights, gmm.means, gmm.covariances)
    ]
    return np.stack(columns, axis=1)


def _check_codes(gmm: GmmModel, codes: np.ndarray) -> np.ndarray:
    codes = np.atleast_2d(np.asarray(codes, dtype=np.float64))
    if codes.shape[1] != gmm.dim:
        raise ShapeMismatchError(f"codes have {codes.shape[1]} columns, mixture has {gmm.dim}")
    return codes


def gmm_responsibilities(gmm: GmmModel, codes: np.ndarray) -> np.ndarray:
    log_joint = _log_joint(gmm, _check_codes(gmm, codes))
    return np.exp(log_joint - logsumexp(log_joint, axis=1, keepdims=True))


def gmm_log_likelihood(gmm: GmmModel, codes: np.ndarray) -> float:
    """Mean per-sample log-likelihood"""
    return float(np.mean(logsumexp(_log_joint(gmm, _check_codes(gmm, codes)), axis=1)))


def gmm_predict(gmm: GmmModel, codes: np.ndarray) -> np.ndarray:
    """Most responsible component per code"""
    return np.argmax(_log_joint(gmm, _check_codes(gmm, codes)), axis=1)


def _kmeans_plus_plus(codes: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = [codes[rng.integers(len(codes))]]
    for _ in range(1, k):
        d2 = np.min(
            np.stack([np.sum((codes - c) ** 2, axis=1) for c in centers], axis=1), axis=1
        )
        total = float(d2.sum())
        if total <= 0:
            centers.append(codes[rng.integers(len(codes))])
        else:
            centers.append(codes[rng.choice(len(codes), p=d2 / total)])
    return np.array(centers)


def _m_step(
    codes: np.ndarray,
    resp: np.ndarray,
    reg_covar: float,
    rng: np.random.Generator,
    global_cov: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    n, d = codes.shape
    counts = resp.sum(axis=0)
    weights = np.empty(resp.shape[1])
    means = np.empty((resp.shape[1], d))
    covariances = np.empty((resp.shape[1], d, d))
    reinitialized = False
    for k in range(resp.shape[1]):
        if counts[k] < EMPTY_COMPONENT * n:
            index = int(rng.integers(n))
            logger.warning(f"GMM component {k} is empty; reinitializing from datum {index}")
            weights[k] = 1.0 / resp.shape[1]
            means[k] = codes[index]
            covariances[k] = global_cov + reg_covar * np.eye(d)
            reinitialized = True
            continue
        weights[k] = counts[k] / n
        means[k] = resp[:, k] @ codes / counts[k]
        centered = codes - means[k]
        cov = (resp[:, k, None] * centered).T @ centered / counts[k]
        covariances[k] = 0.5 * (cov + cov.T) + reg_covar * np.eye(d)
    return weights / weights.sum(), means, covariances, reinitialized


def gmm_fit_em(
    codes: np.ndarray,
    n_components: int,
    seed: int = 0,
    max_iter: int = 200,
    tol: float = 1e-6,
    reg_covar: float = 1e-6,
) -> GmmModel:
    """EM with k-means++ seeding and a covariance floor ``reg_covar * I``"""
    codes = np.atleast_2d(np.asarray(codes, dtype=np.float64))
    n, d = codes.shape
    if n_components < 1 or n < n_components:
        raise UsageError(f"cannot fit {n_components} components to {n} samples")
    rng = np.random.default_rng(seed)
    global_cov = np.atleast_2d(np.cov(codes, rowvar=False, bias=True)).reshape(d, d)

    gmm = GmmModel(
        weights=np.full(n_components, 1.0 / n_components),
        means=_kmeans_plus_plus(codes, n_components, rng),
        covariances=np.repeat((global_cov + reg_covar * np.eye(d))[None], n_components, axis=0),
    )
    history = [gmm_log_likelihood(gmm, codes)]
    converged = False
    decreases = 0
    for iteration in range(max_iter):
        resp = gmm_responsibilities(gmm, codes)
        weights, means, covariances, reinitialized = _m_step(codes, resp, reg_covar, rng, global_cov)
        gmm = GmmModel(weights=weights, means=means, covariances=covariances)
        ll = gmm_log_likelihood(gmm, codes)
        if ll < history[-1] - 1e-9 * abs(history[-1]) and not reinitialized:
            if decreases == 0:
                logger.error(f"EM log-likelihood decreased at iteration {iteration}: {history[-1]} -> {ll}")
            decreases += 1
        history.append(ll)
        if not reinitialized and abs(ll - history[-2]) < tol:
            converged = True
            break

    if decreases > 1:
        logger.error(f"EM log-likelihood decreased in {decreases} iterations in total")
    logger.info(
        f"GMM with {n_components} components: log-likelihood {history[-1]:.6f} "
        f"after {len(history) - 1} iterations (converged={converged})"
    )
    return GmmModel(
        weights=gmm.weights,
        means=gmm.means,
        covariances=gmm.covariances,
        log_likelihoods=history,
        converged=converged,
    )


def sample_gmm(gmm: GmmModel, n: int, seed: int = 0, component: Optional[int] = None) -> np.ndarray:
    """Draw ``n`` codes from the mixture, or from one component"""
    rng = np.random.default_rng(seed)
    if component is not None:
        if not 0 <= component < gmm.n_components:
            raise UsageError(f"component {component} out of range")
        labels = np.full(n, component)
    else:
        labels = rng.choice(gmm.n_components, size=n, p=gmm.weights)
    samples = np.empty((n, gmm.dim))
    for k in range(gmm.n_components):
        chosen = np.flatnonzero(labels == k)
        if chosen.size:
            samples[chosen] = rng.multivariate_normal(gmm.means[k], gmm.covariances[k], size=chosen.size)
    return samples


def _checked_covariance(covariance: np.ndarray) -> np.ndarray:
    covariance = np.atleast_2d(np.asarray(covariance, dtype=np.float64))
    if covariance.shape[0] != covariance.shape[1]:
        raise ShapeMismatchError(f"covariance must be square, got {covariance.shape}")
    symmetric = 0.5 * (covariance + covariance.T)
    eigenvalues = linalg.eigvalsh(symmetric)
    if eigenvalues[0] < -PSD_TOLERANCE * max(1.0, abs(eigenvalues[-1])):
        raise InvalidCovarianceError(
            f"covariance is not positive semi-definite (smallest eigenvalue {eigenvalues[0]:.3e})"
        )
    return symmetric


def sqrtm_psd(matrix: np.ndarray) -> np.ndarray:
    """Symmetric square root with eigenvalues clamped at zero"""
    eigenvalues, eigenvectors = linalg.eigh(matrix)
    return (eigenvectors * np.sqrt(np.maximum(eigenvalues, 0.0))) @ eigenvectors.T


def gaussian_w2(mu_i: np.ndarray, sigma_i: np.ndarray, mu_j: np.ndarray, sigma_j: np.ndarray) -> float:
    """Closed-form 2-Wasserstein distance between two Gaussians"""
    mu_i = np.atleast_1d(np.asarray(mu_i, dtype=np.float64))
    mu_j = np.atleast_1d(np.asarray(mu_j, dtype=np.float64))
    sigma_i, sigma_j = _checked_covariance(sigma_i), _checked_covariance(sigma_j)
    if not (mu_i.shape[0] == mu_j.shape[0] == sigma_i.shape[0] == sigma_j.shape[0]):
        raise ShapeMismatchError("means and covariances must share one dimension")
    if np.array_equal(mu_i, mu_j) and np.array_equal(sigma_i, sigma_j):
        return 0.0
    root_i = sqrtm_psd(sigma_i)
    cross = sqrtm_psd(0.5 * ((root_i @ sigma_j @ root_i) + (root_i @ sigma_j @ root_i).T))
    delta = mu_i - mu_j
    w2_squared = float(delta @ delta + np.trace(sigma_i) + np.trace(sigma_j) - 2.0 * np.trace(cross))
    return math.sqrt(max(w2_squared, 0.0))


def pairwise_w2(gmm: GmmModel) -> np.ndarray:
    k = gmm.n_components
    distances = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            distances[i, j] = distances[j, i] = gaussian_w2(
                gmm.means[i], gmm.covariances[i], gmm.means[j], gmm.covariances[j]
            )
    return distances


def normalized_pairwise_w2(gmm: GmmModel) -> np.ndarray:
    """Pairwise component distances divided by their maximum"""
    if gmm.n_components < 2:
        raise UsageError("normalized distances need at least two components")
    distances = pairwise_w2(gmm)
    largest = float(distances.max())
    if largest <= 0:
        raise DegenerateNormalizationError("all mixture components are identical")
    normalized = distances / largest
    np.fill_diagonal(normalized, 0.0)
    return normalized
