"""
Adam optimizer over plain parameter arrays
"""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from ..core.exceptions import ShapeMismatchError


@dataclass
class AdamState:
    """Bias-corrected Adam moments, one pair per parameter"""
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    first_moment: List[np.ndarray] = field(default_factory=list)
    second_moment: List[np.ndarray] = field(default_factory=list)

    @classmethod
    def for_params(cls, params: Sequence[np.ndarray], lr: float = 1e-3) -> "AdamState":
        return cls(
            lr=lr,
            first_moment=[np.zeros(p.shape) for p in params],
            second_moment=[np.zeros(p.shape) for p in params],
        )


def adam_step(
    state: AdamState,
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
) -> List[np.ndarray]:
    """One Adam update; returns new parameter arrays in the dtype of the inputs"""
    if len(params) != len(grads):
        raise ShapeMismatchError(f"adam_step: {len(params)} parameters but {len(grads)} gradients")
    if not state.first_moment:
        state.first_moment = [np.zeros(p.shape) for p in params]
        state.second_moment = [np.zeros(p.shape) for p in params]
    if len(state.first_moment) != len(params):
        raise ShapeMismatchError("adam_step: optimizer state does not match the parameter list")

    state.step_count += 1
    t = state.step_count
    correction1 = 1.0 - state.beta1 ** t
    correction2 = 1.0 - state.beta2 ** t

    updated = []
    for i, (p, g) in enumerate(zip(params, grads)):
        g = np.asarray(g, dtype=np.float64)
        if p.shape != g.shape or state.first_moment[i].shape != p.shape:
            raise ShapeMismatchError(f"adam_step: parameter {i} has shape {p.shape}, gradient {g.shape}")
        m = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * g
        v = state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * g * g
        state.first_moment[i] = m
        state.second_moment[i] = v
        step = state.lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
        updated.append((np.asarray(p, dtype=np.float64) - step).astype(p.dtype))
    return updated
