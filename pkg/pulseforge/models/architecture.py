"""
Convolutional encoder/decoder and the parameter container
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, MutableMapping, Optional, Tuple, Union

import numpy as np

from ..core.exceptions import ShapeMismatchError
from ..data.models import ArchConfig, ModelKind
from ..diffcore import DiffArray, batch_norm_statistics, constant, ops

logger = logging.getLogger(__name__)

BN_MOMENTUM = 0.1

Weights = Mapping[str, DiffArray]
BatchStats = MutableMapping[str, Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class ModelParams:
    """Encoder and decoder parameters with batch-norm running statistics"""
    arch: ArchConfig
    kind: ModelKind
    weights: Dict[str, np.ndarray]
    buffers: Dict[str, np.ndarray]
    beta: float = 1.0
    metadata: Dict[str, object] = field(default_factory=dict, compare=False)

    @property
    def head_dim(self) -> int:
        """Width of the encoder head (2 d_z for the beta-VAE)"""
        return self.arch.latent_dim * (2 if self.kind is ModelKind.BETA_VAE else 1)

    def with_weights(self, weights: Dict[str, np.ndarray]) -> "ModelParams":
        return replace(self, weights=weights)

    def with_buffers(self, buffers: Dict[str, np.ndarray]) -> "ModelParams":
        return replace(self, buffers=buffers)

    def parameter_count(self) -> int:
        return int(sum(w.size for w in self.weights.values()))


def _needs_projection(arch: ArchConfig, c_in: int, c_out: int, stride: int) -> bool:
    return c_in != c_out or stride != 1


def encoder_layout(arch: ArchConfig) -> List[Tuple[int, int, int, int]]:
    """(in channels, out channels, kernel, stride) per encoder block"""
    widths = (1,) + tuple(arch.channels)
    return [
        (widths[i], widths[i + 1], arch.kernel_sizes[i], arch.strides[i])
        for i in range(len(arch.channels))
    ]


def decoder_layout(arch: ArchConfig) -> List[Tuple[int, int, int, int]]:
    """Mirror of the encoder: block j maps channels[j] to channels[j - 1] (or channels[0])"""
    layout = []
    for j in reversed(range(len(arch.channels))):
        c_in = arch.channels[j]
        c_out = arch.channels[j - 1] if j > 0 else arch.channels[0]
        layout.append((c_in, c_out, arch.kernel_sizes[j], arch.strides[j]))
    return layout


def parameter_shapes(arch: ArchConfig, kind: ModelKind) -> Tuple[Dict[str, Tuple[int, ...]], Dict[str, Tuple[int, ...]]]:
    """Shapes of all weights and buffers, in a fixed order"""
    weights: Dict[str, Tuple[int, ...]] = {}
    buffers: Dict[str, Tuple[int, ...]] = {}
    head = arch.latent_dim * (2 if ModelKind(kind) is ModelKind.BETA_VAE else 1)
    flat = arch.channels[-1] * arch.bottleneck_len

    for i, (c_in, c_out, k, s) in enumerate(encoder_layout(arch)):
        weights[f"enc{i}.conv.w"] = (c_out, c_in, k)
        weights[f"enc{i}.conv.b"] = (c_out,)
        weights[f"enc{i}.bn.gamma"] = (c_out,)
        weights[f"enc{i}.bn.beta"] = (c_out,)
        buffers[f"enc{i}.bn.running_mean"] = (c_out,)
        buffers[f"enc{i}.bn.running_var"] = (c_out,)
        if arch.use_residual and _needs_projection(arch, c_in, c_out, s):
            weights[f"enc{i}.skip.w"] = (c_out, c_in, 1)
            weights[f"enc{i}.skip.b"] = (c_out,)
    weights["enc.head.w"] = (head, flat)
    weights["enc.head.b"] = (head,)

    weights["dec.fc.w"] = (flat, arch.latent_dim)
    weights["dec.fc.b"] = (flat,)
    for j, (c_in, c_out, k, s) in enumerate(decoder_layout(arch)):
        weights[f"dec{j}.deconv.w"] = (c_in, c_out, k)
        weights[f"dec{j}.deconv.b"] = (c_out,)
        weights[f"dec{j}.bn.gamma"] = (c_out,)
        weights[f"dec{j}.bn.beta"] = (c_out,)
        buffers[f"dec{j}.bn.running_mean"] = (c_out,)
        buffers[f"dec{j}.bn.running_var"] = (c_out,)
        if arch.use_residual and _needs_projection(arch, c_in, c_out, s):
            weights[f"dec{j}.skip.w"] = (c_out, c_in, 1)
            weights[f"dec{j}.skip.b"] = (c_out,)
    weights["dec.out.w"] = (1, arch.channels[0], arch.output_kernel)
    weights["dec.out.b"] = (1,)
    return weights, buffers


def init_params(arch: ArchConfig, kind: ModelKind = ModelKind.WAE, seed: int = 0, beta: float = 1.0) -> ModelParams:
    """He-normal convolutions, zero biases, unit batch-norm scales"""
    rng = np.random.default_rng(seed)
    weight_shapes, buffer_shapes = parameter_shapes(arch, kind)
    weights: Dict[str, np.ndarray] = {}
    for name, shape in weight_shapes.items():
        if name.endswith(".gamma"):
            value = np.ones(shape)
        elif name.endswith(".b") or name.endswith(".beta"):
            value = np.zeros(shape)
        elif name.endswith("deconv.w"):
            fan_in = shape[0] * shape[2]
            value = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
        elif name in ("enc.head.w", "dec.fc.w", "dec.out.w"):
            fan_in = int(np.prod(shape[1:]))
            value = rng.normal(0.0, np.sqrt(1.0 / fan_in), size=shape)
        else:
            fan_in = int(np.prod(shape[1:]))
            value = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
        weights[name] = value.astype(np.float32)
    buffers = {
        name: (np.ones(shape) if name.endswith("running_var") else np.zeros(shape)).astype(np.float32)
        for name, shape in buffer_shapes.items()
    }
    params = ModelParams(arch=arch, kind=ModelKind(kind), weights=weights, buffers=buffers, beta=beta)
    logger.debug(f"Initialized {kind} with {params.parameter_count()} parameters")
    return params


def as_constants(params: ModelParams) -> Dict[str, DiffArray]:
    return {name: constant(w) for name, w in params.weights.items()}


def _batch_norm(
    prefix: str,
    h: DiffArray,
    weights: Weights,
    buffers: Mapping[str, np.ndarray],
    training: bool,
    stats: Optional[BatchStats],
) -> DiffArray:
    if training and stats is not None:
        stats[prefix] = batch_norm_statistics(h.values)
    return ops.batch_norm1d(
        h,
        weights[f"{prefix}.gamma"],
        weights[f"{prefix}.beta"],
        running_mean=buffers[f"{prefix}.running_mean"],
        running_var=buffers[f"{prefix}.running_var"],
        training=training,
    )


def encoder_graph(
    params: ModelParams,
    weights: Weights,
    x: DiffArray,
    training: bool = False,
    stats: Optional[BatchStats] = None,
) -> DiffArray:
    """Profiles [n, L] to head outputs [n, d_z] (or [n, 2 d_z])"""
    arch = params.arch
    if x.ndim != 2 or x.shape[1] != arch.input_len:
        raise ShapeMismatchError(f"encoder expects [n, {arch.input_len}], got {x.shape}")
    n = x.shape[0]
    h = ops.reshape(x, (n, 1, arch.input_len))
    for i, (c_in, c_out, k, s) in enumerate(encoder_layout(arch)):
        y = ops.conv1d(h, weights[f"enc{i}.conv.w"], weights[f"enc{i}.conv.b"], stride=s, padding=k // 2)
        y = ops.leaky_relu(_batch_norm(f"enc{i}.bn", y, weights, params.buffers, training, stats))
        if arch.use_residual:
            if _needs_projection(arch, c_in, c_out, s):
                y = ops.add(y, ops.conv1d(h, weights[f"enc{i}.skip.w"], weights[f"enc{i}.skip.b"], stride=s))
            else:
                y = ops.add(y, h)
        h = y
    flat = ops.reshape(h, (n, arch.channels[-1] * arch.bottleneck_len))
    return ops.affine(flat, weights["enc.head.w"], weights["enc.head.b"])


def decoder_graph(
    params: ModelParams,
    weights: Weights,
    z: DiffArray,
    training: bool = False,
    stats: Optional[BatchStats] = None,
) -> DiffArray:
    """Codes [n, d_z] to reconstructions [n, L] in (-1, 1)"""
    arch = params.arch
    if z.ndim != 2 or z.shape[1] != arch.latent_dim:
        raise ShapeMismatchError(f"decoder expects [n, {arch.latent_dim}], got {z.shape}")
    n = z.shape[0]
    h = ops.affine(z, weights["dec.fc.w"], weights["dec.fc.b"])
    h = ops.reshape(h, (n, arch.channels[-1], arch.bottleneck_len))
    for j, (c_in, c_out, k, s) in enumerate(decoder_layout(arch)):
        y = ops.conv_transpose1d(
            h, weights[f"dec{j}.deconv.w"], weights[f"dec{j}.deconv.b"],
            stride=s, padding=k // 2, output_padding=s - 1,
        )
        y = ops.leaky_relu(_batch_norm(f"dec{j}.bn", y, weights, params.buffers, training, stats))
        if arch.use_residual:
            skip = ops.upsample1d(h, s) if s > 1 else h
            if _needs_projection(arch, c_in, c_out, s):
                skip = ops.conv1d(skip, weights[f"dec{j}.skip.w"], weights[f"dec{j}.skip.b"])
            y = ops.add(y, skip)
        h = y
    out = ops.conv1d(h, weights["dec.out.w"], weights["dec.out.b"], padding=arch.output_kernel // 2)
    return ops.reshape(ops.tanh(out), (n, arch.input_len))


def split_head(head: DiffArray, latent_dim: int) -> Tuple[DiffArray, DiffArray]:
    """Mean and log-variance halves of a beta-VAE head"""
    return head[:, :latent_dim], head[:, latent_dim:]


def _as_batch(batch: Union[np.ndarray, DiffArray], width: int, what: str) -> DiffArray:
    values = batch.values if isinstance(batch, DiffArray) else np.asarray(batch, dtype=np.float64)
    if values.ndim != 2 or values.shape[1] != width:
        raise ShapeMismatchError(f"{what} must have shape [n, {width}], got {values.shape}")
    return constant(values)


def encode(params: ModelParams, batch: np.ndarray) -> Union[np.ndarray, Tuple[np.ndarray, np.ndarray]]:
    """Eval-mode codes [n, d_z]; the beta-VAE returns (mean, log-variance)"""
    x = _as_batch(batch, params.arch.input_len, "profiles")
    head = encoder_graph(params, as_constants(params), x, training=False)
    if params.kind is ModelKind.BETA_VAE:
        mu, logvar = split_head(head, params.arch.latent_dim)
        return mu.numpy(), logvar.numpy()
    return head.numpy()


def encode_mean(params: ModelParams, batch: np.ndarray) -> np.ndarray:
    """Deterministic codes for either kind (the posterior mean for the beta-VAE)"""
    codes = encode(params, batch)
    return codes[0] if isinstance(codes, tuple) else codes


def decode(params: ModelParams, codes: np.ndarray) -> np.ndarray:
    """Eval-mode reconstructions [n, L]"""
    z = _as_batch(codes, params.arch.latent_dim, "codes")
    return decoder_graph(params, as_constants(params), z, training=False).numpy()


def reconstruct(params: ModelParams, batch: np.ndarray) -> np.ndarray:
    return decode(params, encode_mean(params, batch))


def update_running_stats(params: ModelParams, stats: Mapping[str, Tuple[np.ndarray, np.ndarray]], momentum: float = BN_MOMENTUM) -> ModelParams:
    """Blend batch statistics into the running buffers"""
    buffers = dict(params.buffers)
    for prefix, (batch_mean, batch_var) in stats.items():
        for suffix, value in (("running_mean", batch_mean), ("running_var", batch_var)):
            key = f"{prefix}.{suffix}"
            blended = (1.0 - momentum) * buffers[key].astype(np.float64) + momentum * value
            buffers[key] = blended.astype(np.float32)
    return params.with_buffers(buffers)
