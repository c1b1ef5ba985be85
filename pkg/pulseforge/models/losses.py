"""
WAE and beta-VAE objectives
"""

from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import ShapeMismatchError, UsageError
from ..data.models import DEFAULT_IMQ_SCALES, ModelKind, TrainConfig
from ..diffcore import DiffArray, as_diff, constant, ops
from .architecture import BatchStats, ModelParams, Weights, decoder_graph, encoder_graph, split_head

LossParts = Dict[str, float]


def squared_distances(a: DiffArray, b: DiffArray) -> DiffArray:
    """Pairwise ||a_i - b_j||^2 as an [n, m] array"""
    n, m = a.shape[0], b.shape[0]
    a_sq = ops.sum(ops.mul(a, a), axis=1, keepdims=True)
    b_sq = ops.reshape(ops.sum(ops.mul(b, b), axis=1), (1, m))
    cross = ops.matmul(a, ops.transpose(b))
    return ops.sub(
        ops.add(ops.broadcast_to(a_sq, (n, m)), ops.broadcast_to(b_sq, (n, m))),
        ops.mul(cross, 2.0),
    )


def imq_kernel(sq_dist: DiffArray, scale: float) -> DiffArray:
    """k = C / (C + d)"""
    return ops.div(scale, ops.add(sq_dist, scale))


def _kernel_mean(a: DiffArray, b: DiffArray, scales: Sequence[float], exclude_diagonal: bool) -> DiffArray:
    sq = squared_distances(a, b)
    n, m = sq.shape
    mask = np.ones((n, m))
    if exclude_diagonal:
        np.fill_diagonal(mask, 0.0)
    total = None
    for c in scales:
        term = ops.sum(ops.mul(imq_kernel(sq, c), constant(mask)))
        total = term if total is None else ops.add(total, term)
    return ops.div(total, float(mask.sum()) * len(scales))


def mmd_imq(
    z_batch: Union[DiffArray, np.ndarray],
    prior_batch: Union[DiffArray, np.ndarray],
    scales: Sequence[float] = DEFAULT_IMQ_SCALES,
) -> DiffArray:
    """
    Unbiased MMD^2 with the inverse multiquadratic kernel, averaged over C = s * 2 d_z.

    Within-batch sums exclude the diagonal; for equal batch sizes so does the cross sum.
    """
    z, p = as_diff(z_batch), as_diff(prior_batch)
    if z.ndim != 2 or p.ndim != 2 or z.shape[1] != p.shape[1]:
        raise ShapeMismatchError(f"mmd_imq: batches {z.shape} and {p.shape} are incompatible")
    if z.shape[0] < 2 or p.shape[0] < 2:
        raise ShapeMismatchError("mmd_imq needs at least two samples per batch")
    base = 2.0 * z.shape[1]
    cs = [s * base for s in scales]
    same_size = z.shape[0] == p.shape[0]
    zz = _kernel_mean(z, z, cs, exclude_diagonal=True)
    pp = _kernel_mean(p, p, cs, exclude_diagonal=True)
    zp = _kernel_mean(z, p, cs, exclude_diagonal=same_size)
    return ops.sub(ops.add(zz, pp), ops.mul(zp, 2.0))


def kl_divergence(mu: DiffArray, logvar: DiffArray) -> DiffArray:
    """KL(N(mu, diag exp(logvar)) || N(0, I)) summed over dimensions, averaged over the batch"""
    terms = ops.sub(
        ops.sub(ops.add(ops.mul(mu, mu), ops.exp(logvar)), 1.0),
        logvar,
    )
    return ops.div(ops.mul(ops.sum(terms), 0.5), float(mu.shape[0]))


def wae_loss(
    params: ModelParams,
    weights: Weights,
    batch: DiffArray,
    rng: np.random.Generator,
    config: TrainConfig,
    training: bool = True,
    stats: Optional[BatchStats] = None,
) -> Tuple[DiffArray, LossParts]:
    """
    MSE(x, G(E(x))) + lambda * MMD^2(E(x), prior draws of the same size).

    Raises ShapeMismatchError for batches of fewer than two samples when lambda > 0.
    """
    codes = encoder_graph(params, weights, batch, training, stats)
    recon = decoder_graph(params, weights, codes, training, stats)
    reconstruction = ops.mse(recon, batch)
    prior = constant(rng.standard_normal(codes.shape))
    if config.lambda_mmd == 0:
        regularizer = constant(0.0)
        loss = reconstruction
    else:
        regularizer = mmd_imq(codes, prior, config.imq_scales)
        loss = ops.add(reconstruction, ops.mul(regularizer, config.lambda_mmd))
    return loss, {
        "loss": loss.item(),
        "reconstruction": reconstruction.item(),
        "regularizer": regularizer.item(),
    }


def vae_loss(
    params: ModelParams,
    weights: Weights,
    batch: DiffArray,
    rng: np.random.Generator,
    beta: float,
    training: bool = True,
    stats: Optional[BatchStats] = None,
    sample: bool = True,
) -> Tuple[DiffArray, LossParts]:
    """MSE + beta * KL with z = mu + sigma * eps (eps omitted when ``sample`` is false)"""
    if params.kind is not ModelKind.BETA_VAE:
        raise UsageError(f"vae_loss needs a beta-VAE, got {params.kind.value}")
    head = encoder_graph(params, weights, batch, training, stats)
    mu, logvar = split_head(head, params.arch.latent_dim)
    if sample:
        eps = constant(rng.standard_normal(mu.shape))
        z = ops.add(mu, ops.mul(ops.exp(ops.mul(logvar, 0.5)), eps))
    else:
        z = mu
    recon = decoder_graph(params, weights, z, training, stats)
    reconstruction = ops.mse(recon, batch)
    regularizer = kl_divergence(mu, logvar)
    loss = ops.add(reconstruction, ops.mul(regularizer, beta))
    return loss, {
        "loss": loss.item(),
        "reconstruction": reconstruction.item(),
        "regularizer": regularizer.item(),
    }


def objective(
    params: ModelParams,
    weights: Weights,
    batch: DiffArray,
    rng: np.random.Generator,
    config: TrainConfig,
    training: bool = True,
    stats: Optional[BatchStats] = None,
) -> Tuple[DiffArray, LossParts]:
    """Loss matching ``params.kind``"""
    if params.kind is ModelKind.BETA_VAE:
        return vae_loss(params, weights, batch, rng, config.beta, training, stats, sample=training)
    return wae_loss(params, weights, batch, rng, config, training, stats)
