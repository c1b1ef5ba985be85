"""
Reverse-mode differentiable array engine
"""

from . import ops
from .gradcheck import check_gradients, numerical_gradient, relative_error
from .ops import OPS, batch_norm_statistics, forward
from .optim import AdamState, adam_step
from .tensor import DiffArray, Tape, TapeRecord, as_diff, backward, constant, gradients

__all__ = [
    'ops',
    'OPS',
    'forward',
    'batch_norm_statistics',
    'DiffArray',
    'Tape',
    'TapeRecord',
    'as_diff',
    'constant',
    'backward',
    'gradients',
    'AdamState',
    'adam_step',
    'check_gradients',
    'numerical_gradient',
    'relative_error',
]
