"""
Operation kinds of the differentiable engine.

Every kind computes its forward value in float64 and, when at least one
input is tracked, records a vector-Jacobian product on the inputs' tape.
Binary elementwise kinds accept operands of identical shape or a scalar;
there is no implicit broadcasting, use ``broadcast_to`` explicitly.
"""

from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..core.exceptions import ShapeMismatchError
from .tensor import ArrayLike, DiffArray, Tape, as_diff, constant

LEAKY_SLOPE = 0.01
BN_EPS = 1e-5

Axis = Optional[Union[int, Tuple[int, ...]]]


def _tape_of(inputs: Sequence[DiffArray]) -> Optional[Tape]:
    tape = None
    for x in inputs:
        if x.tape is None or x.node_id is None:
            continue
        if tape is None:
            tape = x.tape
        elif x.tape is not tape:
            raise ValueError("inputs recorded on different tapes")
    return tape


def _emit(kind: str, inputs: Sequence[DiffArray], output: np.ndarray, vjp) -> DiffArray:
    tape = _tape_of(inputs)
    if tape is None:
        return DiffArray(output)
    return tape.record(kind, inputs, output, vjp)


def _reduce_to(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    # scalar operand of a binary kind
    return np.asarray(grad.sum()).reshape(shape)


def _check_binary(kind: str, a: DiffArray, b: DiffArray) -> None:
    if a.shape == b.shape:
        return
    if a.size == 1 and a.ndim <= b.ndim or b.size == 1 and b.ndim <= a.ndim:
        return
    raise ShapeMismatchError(f"{kind}: shapes {a.shape} and {b.shape} differ")


# Elementwise arithmetic

def add(a: ArrayLike, b: ArrayLike) -> DiffArray:
    a, b = as_diff(a), as_diff(b)
    _check_binary("add", a, b)
    out = a.values + b.values
    return _emit("add", (a, b), out, lambda g: (_reduce_to(g, a.shape), _reduce_to(g, b.shape)))


def sub(a: ArrayLike, b: ArrayLike) -> DiffArray:
    a, b = as_diff(a), as_diff(b)
    _check_binary("sub", a, b)
    out = a.values - b.values
    return _emit("sub", (a, b), out, lambda g: (_reduce_to(g, a.shape), _reduce_to(-g, b.shape)))


def mul(a: ArrayLike, b: ArrayLike) -> DiffArray:
    a, b = as_diff(a), as_diff(b)
    _check_binary("mul", a, b)
    out = a.values * b.values
    return _emit(
        "mul", (a, b), out,
        lambda g: (_reduce_to(g * b.values, a.shape), _reduce_to(g * a.values, b.shape)),
    )


def div(a: ArrayLike, b: ArrayLike) -> DiffArray:
    a, b = as_diff(a), as_diff(b)
    _check_binary("div", a, b)
    out = a.values / b.values

    def vjp(g):
        return (
            _reduce_to(g / b.values, a.shape),
            _reduce_to(-g * a.values / (b.values * b.values), b.shape),
        )
    return _emit("div", (a, b), out, vjp)


def power(x: ArrayLike, exponent: float) -> DiffArray:
    x = as_diff(x)
    out = x.values ** exponent
    return _emit("power", (x,), out, lambda g: (g * exponent * x.values ** (exponent - 1),))


def exp(x: ArrayLike) -> DiffArray:
    x = as_diff(x)
    out = np.exp(x.values)
    return _emit("exp", (x,), out, lambda g: (g * out,))


def log(x: ArrayLike) -> DiffArray:
    x = as_diff(x)
    out = np.log(x.values)
    return _emit("log", (x,), out, lambda g: (g / x.values,))


def sqrt(x: ArrayLike) -> DiffArray:
    """Square root; the gradient at 0 is taken as 0"""
    x = as_diff(x)
    out = np.sqrt(np.maximum(x.values, 0.0))

    def vjp(g):
        safe = np.where(out > 0, out, 1.0)
        return (np.where(out > 0, g / (2.0 * safe), 0.0),)
    return _emit("sqrt", (x,), out, vjp)


# Activations

def tanh(x: ArrayLike) -> DiffArray:
    x = as_diff(x)
    out = np.tanh(x.values)
    return _emit("tanh", (x,), out, lambda g: (g * (1.0 - out * out),))


def leaky_relu(x: ArrayLike, slope: float = LEAKY_SLOPE) -> DiffArray:
    x = as_diff(x)
    positive = x.values > 0
    out = np.where(positive, x.values, slope * x.values)
    return _emit("leaky_relu", (x,), out, lambda g: (np.where(positive, g, slope * g),))


def relu(x: ArrayLike) -> DiffArray:
    """Clamp at zero"""
    x = as_diff(x)
    positive = x.values > 0
    out = np.where(positive, x.values, 0.0)
    return _emit("relu", (x,), out, lambda g: (np.where(positive, g, 0.0),))


# Reductions and shape kinds

def sum(x: ArrayLike, axis: Axis = None, keepdims: bool = False) -> DiffArray:  # noqa: A001
    x = as_diff(x)
    out = np.sum(x.values, axis=axis, keepdims=keepdims)

    def vjp(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, x.shape).copy(),)
    return _emit("sum", (x,), np.asarray(out), vjp)


def mean(x: ArrayLike, axis: Axis = None, keepdims: bool = False) -> DiffArray:
    x = as_diff(x)
    count = x.size if axis is None else int(np.prod([x.shape[a] for a in np.atleast_1d(axis)]))
    return mul(sum(x, axis=axis, keepdims=keepdims), 1.0 / count)


def reshape(x: ArrayLike, shape: Tuple[int, ...]) -> DiffArray:
    x = as_diff(x)
    try:
        out = x.values.reshape(shape)
    except ValueError as e:
        raise ShapeMismatchError(f"reshape: {e}") from e
    return _emit("reshape", (x,), out, lambda g: (g.reshape(x.shape),))


def transpose(x: ArrayLike, axes: Optional[Tuple[int, ...]] = None) -> DiffArray:
    x = as_diff(x)
    axes = tuple(reversed(range(x.ndim))) if axes is None else tuple(axes)
    inverse = tuple(np.argsort(axes))
    out = np.transpose(x.values, axes)
    return _emit("transpose", (x,), out, lambda g: (np.transpose(g, inverse),))


def broadcast_to(x: ArrayLike, shape: Tuple[int, ...]) -> DiffArray:
    """Tile singleton axes up to ``shape`` (same rank required)"""
    x = as_diff(x)
    shape = tuple(shape)
    if x.ndim != len(shape) or any(s != t and s != 1 for s, t in zip(x.shape, shape)):
        raise ShapeMismatchError(f"broadcast_to: cannot expand {x.shape} to {shape}")
    expanded = tuple(i for i, (s, t) in enumerate(zip(x.shape, shape)) if s != t)
    out = np.broadcast_to(x.values, shape).copy()
    return _emit("broadcast_to", (x,), out, lambda g: (g.sum(axis=expanded, keepdims=True),))


def index(x: ArrayLike, key) -> DiffArray:
    """Basic or advanced indexing; gradients scatter-add back"""
    x = as_diff(x)
    out = np.array(x.values[key], dtype=np.float64)

    def vjp(g):
        full = np.zeros_like(x.values)
        np.add.at(full, key, g)
        return (full,)
    return _emit("index", (x,), out, vjp)


def concat(parts: Sequence[ArrayLike], axis: int = 0) -> DiffArray:
    arrays = [as_diff(p) for p in parts]
    try:
        out = np.concatenate([a.values for a in arrays], axis=axis)
    except ValueError as e:
        raise ShapeMismatchError(f"concat: {e}") from e
    bounds = np.cumsum([a.shape[axis] for a in arrays])[:-1]
    return _emit("concat", arrays, out, lambda g: tuple(np.split(g, bounds, axis=axis)))


def cumsum(x: ArrayLike, axis: int = -1) -> DiffArray:
    x = as_diff(x)
    out = np.cumsum(x.values, axis=axis)

    def vjp(g):
        return (np.flip(np.cumsum(np.flip(g, axis=axis), axis=axis), axis=axis),)
    return _emit("cumsum", (x,), out, vjp)


def matmul(a: ArrayLike, b: ArrayLike) -> DiffArray:
    a, b = as_diff(a), as_diff(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(f"matmul: shapes {a.shape} and {b.shape} incompatible")
    out = a.values @ b.values
    return _emit("matmul", (a, b), out, lambda g: (g @ b.values.T, a.values.T @ g))


# Layers

def affine(x: ArrayLike, weight: ArrayLike, bias: Optional[ArrayLike] = None) -> DiffArray:
    """Fully connected layer y = x W^T + b with W of shape [out, in]"""
    x, weight = as_diff(x), as_diff(weight)
    if x.ndim != 2 or weight.ndim != 2 or x.shape[1] != weight.shape[1]:
        raise ShapeMismatchError(f"affine: input {x.shape} does not fit weight {weight.shape}")
    b = as_diff(bias) if bias is not None else constant(np.zeros(weight.shape[0]))
    if b.shape != (weight.shape[0],):
        raise ShapeMismatchError(f"affine: bias {b.shape} does not fit weight {weight.shape}")
    out = x.values @ weight.values.T + b.values

    def vjp(g):
        return (g @ weight.values, g.T @ x.values, g.sum(axis=0))
    return _emit("affine", (x, weight, b), out, vjp)


def _conv_windows(xp: np.ndarray, kernel: int, stride: int, out_len: int) -> np.ndarray:
    windows = sliding_window_view(xp, kernel, axis=2)
    return windows[:, :, ::stride, :][:, :, :out_len, :]


def conv1d(
    x: ArrayLike,
    weight: ArrayLike,
    bias: Optional[ArrayLike] = None,
    stride: int = 1,
    padding: int = 0,
) -> DiffArray:
    """Cross-correlation of [N, C_in, L] with weights [C_out, C_in, K]"""
    x, weight = as_diff(x), as_diff(weight)
    if x.ndim != 3 or weight.ndim != 3 or x.shape[1] != weight.shape[1]:
        raise ShapeMismatchError(f"conv1d: input {x.shape} does not fit weight {weight.shape}")
    n, c_in, length = x.shape
    c_out, _, kernel = weight.shape
    padded_len = length + 2 * padding
    if padded_len < kernel or stride < 1:
        raise ShapeMismatchError(f"conv1d: kernel {kernel} longer than padded input {padded_len}")
    out_len = (padded_len - kernel) // stride + 1
    b = as_diff(bias) if bias is not None else constant(np.zeros(c_out))

    xp = np.pad(x.values, ((0, 0), (0, 0), (padding, padding)))
    cols = _conv_windows(xp, kernel, stride, out_len)
    out = np.tensordot(cols, weight.values, axes=([1, 3], [1, 2])).transpose(0, 2, 1)
    out = out + b.values[None, :, None]

    def vjp(g):
        d_weight = np.tensordot(g, cols, axes=([0, 2], [0, 2]))
        d_cols = np.tensordot(g, weight.values, axes=([1], [0]))  # [N, L_out, C_in, K]
        d_xp = np.zeros_like(xp)
        span = stride * (out_len - 1) + 1
        for k in range(kernel):
            d_xp[:, :, k:k + span:stride] += d_cols[:, :, :, k].transpose(0, 2, 1)
        return (d_xp[:, :, padding:padding + length], d_weight, g.sum(axis=(0, 2)))
    return _emit("conv1d", (x, weight, b), out, vjp)


def conv_transpose1d(
    x: ArrayLike,
    weight: ArrayLike,
    bias: Optional[ArrayLike] = None,
    stride: int = 1,
    padding: int = 0,
    output_padding: int = 0,
) -> DiffArray:
    """Adjoint of conv1d for [N, C_in, L] with weights [C_in, C_out, K]"""
    x, weight = as_diff(x), as_diff(weight)
    if x.ndim != 3 or weight.ndim != 3 or x.shape[1] != weight.shape[0]:
        raise ShapeMismatchError(
            f"conv_transpose1d: input {x.shape} does not fit weight {weight.shape}"
        )
    n, c_in, length = x.shape
    _, c_out, kernel = weight.shape
    full_len = (length - 1) * stride + kernel + output_padding
    out_len = full_len - 2 * padding
    if out_len < 1:
        raise ShapeMismatchError("conv_transpose1d: padding leaves no output")
    b = as_diff(bias) if bias is not None else constant(np.zeros(c_out))
    span = stride * (length - 1) + 1

    full = np.zeros((n, c_out, full_len))
    for k in range(kernel):
        full[:, :, k:k + span:stride] += np.tensordot(x.values, weight.values[:, :, k], axes=([1], [0])).transpose(0, 2, 1)
    out = full[:, :, padding:padding + out_len] + b.values[None, :, None]

    def vjp(g):
        g_full = np.zeros((n, c_out, full_len))
        g_full[:, :, padding:padding + out_len] = g
        d_x = np.zeros_like(x.values)
        d_weight = np.zeros_like(weight.values)
        for k in range(kernel):
            g_k = g_full[:, :, k:k + span:stride]
            d_x += np.tensordot(g_k, weight.values[:, :, k], axes=([1], [1])).transpose(0, 2, 1)
            d_weight[:, :, k] = np.tensordot(x.values, g_k, axes=([0, 2], [0, 2]))
        return (d_x, d_weight, g.sum(axis=(0, 2)))
    return _emit("conv_transpose1d", (x, weight, b), out, vjp)


def batch_norm_statistics(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-channel batch mean and unbiased variance of [N, C, L] input"""
    count = x.shape[0] * x.shape[2]
    batch_mean = x.mean(axis=(0, 2))
    batch_var = x.var(axis=(0, 2)) * count / max(count - 1, 1)
    return batch_mean, batch_var


def batch_norm1d(
    x: ArrayLike,
    gamma: ArrayLike,
    beta: ArrayLike,
    running_mean: Optional[np.ndarray] = None,
    running_var: Optional[np.ndarray] = None,
    training: bool = True,
    eps: float = BN_EPS,
) -> DiffArray:
    """Per-channel normalization of [N, C, L]; eval mode uses the running statistics"""
    x, gamma, beta = as_diff(x), as_diff(gamma), as_diff(beta)
    if x.ndim != 3 or gamma.shape != (x.shape[1],) or beta.shape != (x.shape[1],):
        raise ShapeMismatchError(f"batch_norm1d: input {x.shape} does not fit affine {gamma.shape}")
    g_ = gamma.values[None, :, None]

    if training:
        mu = x.values.mean(axis=(0, 2), keepdims=True)
        var = x.values.var(axis=(0, 2), keepdims=True)
        inv_std = 1.0 / np.sqrt(var + eps)
        x_hat = (x.values - mu) * inv_std
        count = x.shape[0] * x.shape[2]

        def vjp(g):
            d_hat = g * g_
            d_x = inv_std / count * (
                count * d_hat
                - d_hat.sum(axis=(0, 2), keepdims=True)
                - x_hat * (d_hat * x_hat).sum(axis=(0, 2), keepdims=True)
            )
            return (d_x, (g * x_hat).sum(axis=(0, 2)), g.sum(axis=(0, 2)))
    else:
        if running_mean is None or running_var is None:
            raise ValueError("batch_norm1d in eval mode needs running statistics")
        inv_std = 1.0 / np.sqrt(np.asarray(running_var, dtype=np.float64)[None, :, None] + eps)
        x_hat = (x.values - np.asarray(running_mean, dtype=np.float64)[None, :, None]) * inv_std

        def vjp(g):
            return (g * g_ * inv_std, (g * x_hat).sum(axis=(0, 2)), g.sum(axis=(0, 2)))

    out = g_ * x_hat + beta.values[None, :, None]
    return _emit("batch_norm1d", (x, gamma, beta), out, vjp)


def upsample1d(x: ArrayLike, factor: int = 2) -> DiffArray:
    """Nearest-neighbour upsampling along the last axis of [N, C, L]"""
    x = as_diff(x)
    if x.ndim != 3:
        raise ShapeMismatchError(f"upsample1d: expected [N, C, L], got {x.shape}")
    out = np.repeat(x.values, factor, axis=2)
    n, c, length = x.shape
    return _emit("upsample1d", (x,), out, lambda g: (g.reshape(n, c, length, factor).sum(axis=3),))


# Losses

def mse(prediction: ArrayLike, target: ArrayLike) -> DiffArray:
    prediction, target = as_diff(prediction), as_diff(target)
    if prediction.shape != target.shape:
        raise ShapeMismatchError(f"mse: shapes {prediction.shape} and {target.shape} differ")
    diff = prediction.values - target.values
    out = np.asarray(np.mean(diff * diff))
    scale = 2.0 / diff.size

    def vjp(g):
        grad = g * scale * diff
        return (grad, -grad)
    return _emit("mse", (prediction, target), out, vjp)


OPS: Dict[str, Callable[..., DiffArray]] = {
    "add": add,
    "sub": sub,
    "mul": mul,
    "div": div,
    "power": power,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "tanh": tanh,
    "leaky_relu": leaky_relu,
    "relu": relu,
    "sum": sum,
    "mean": mean,
    "reshape": reshape,
    "transpose": transpose,
    "broadcast_to": broadcast_to,
    "index": index,
    "concat": concat,
    "cumsum": cumsum,
    "matmul": matmul,
    "affine": affine,
    "conv1d": conv1d,
    "conv_transpose1d": conv_transpose1d,
    "batch_norm1d": batch_norm1d,
    "upsample1d": upsample1d,
    "mse": mse,
}


def forward(kind: str, *inputs, **attrs) -> DiffArray:
    """Dispatch an operation by kind name"""
    try:
        op = OPS[kind]
    except KeyError:
        raise ValueError(f"unknown operation kind: {kind}") from None
    return op(*inputs, **attrs)
