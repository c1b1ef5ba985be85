"""
Convolutional WAE / beta-VAE models, training and evaluation
"""

from .architecture import (
    ModelParams, decode, decoder_graph, encode, encode_mean, encoder_graph, init_params,
    parameter_shapes, reconstruct
)
from .checkpoint import checkpoint_summary, load_model, save_model
from .compare import compare_models, model_label
from .evaluation import encode_all, evaluate_model, reconstruct_all
from .losses import imq_kernel, kl_divergence, mmd_imq, objective, vae_loss, wae_loss
from .trainer import DataSplit, TrainResult, evaluate_loss, split_indices, train, train_step

__all__ = [
    'ModelParams',
    'decode',
    'decoder_graph',
    'encode',
    'encode_mean',
    'encoder_graph',
    'init_params',
    'parameter_shapes',
    'reconstruct',
    'checkpoint_summary',
    'load_model',
    'save_model',
    'compare_models',
    'model_label',
    'encode_all',
    'evaluate_model',
    'reconstruct_all',
    'imq_kernel',
    'kl_divergence',
    'mmd_imq',
    'objective',
    'vae_loss',
    'wae_loss',
    'DataSplit',
    'TrainResult',
    'evaluate_loss',
    'split_indices',
    'train',
    'train_step',
]
