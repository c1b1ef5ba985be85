"""
Central finite-difference checks for recorded gradients
"""

from typing import Callable, List, Sequence

import numpy as np

from .tensor import DiffArray, Tape, gradients

FD_STEP = 1e-4


def numerical_gradient(
    fn: Callable[[Sequence[np.ndarray]], float],
    inputs: Sequence[np.ndarray],
    h: float = FD_STEP,
) -> List[np.ndarray]:
    """Central differences of a scalar function of several arrays"""
    arrays = [np.array(x, dtype=np.float64, copy=True) for x in inputs]
    result = []
    for arr in arrays:
        grad = np.zeros_like(arr)
        flat = arr.reshape(-1)
        grad_flat = grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            plus = fn(arrays)
            flat[i] = orig - h
            minus = fn(arrays)
            flat[i] = orig
            grad_flat[i] = (plus - minus) / (2.0 * h)
        result.append(grad)
    return result


def analytic_gradient(
    build: Callable[[Sequence[DiffArray]], DiffArray],
    inputs: Sequence[np.ndarray],
) -> List[np.ndarray]:
    tape = Tape()
    leaves = [tape.watch(x) for x in inputs]
    loss = build(leaves)
    return gradients(tape, loss, leaves)


def relative_error(analytic: Sequence[np.ndarray], numeric: Sequence[np.ndarray]) -> float:
    """Norm-wise relative error over all gradient arrays"""
    a = np.concatenate([np.ravel(x) for x in analytic])
    n = np.concatenate([np.ravel(x) for x in numeric])
    scale = max(np.linalg.norm(a), np.linalg.norm(n), 1e-12)
    return float(np.linalg.norm(a - n) / scale)


def check_gradients(
    build: Callable[[Sequence[DiffArray]], DiffArray],
    inputs: Sequence[np.ndarray],
    h: float = FD_STEP,
) -> float:
    """Relative error between tape gradients and central differences of ``build``"""
    analytic = analytic_gradient(build, inputs)

    def evaluate(arrays: Sequence[np.ndarray]) -> float:
        return build([DiffArray(np.asarray(a, dtype=np.float64)) for a in arrays]).item()

    numeric = numerical_gradient(evaluate, inputs, h)
    return relative_error(analytic, numeric)
