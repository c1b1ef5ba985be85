"""
Architecture, training and history models
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DEFAULT_IMQ_SCALES: Tuple[float, ...] = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)
BETA_GRID: Tuple[float, ...] = (1.0, 0.7, 0.5)


class ModelKind(str, Enum):
    """Autoencoder objective"""
    WAE = "wae"
    BETA_VAE = "bvae"


class ArchConfig(BaseModel):
    """Convolutional encoder/decoder layout"""
    model_config = ConfigDict(frozen=True)

    input_len: int = Field(default=512, description="Samples per profile")
    latent_dim: int = Field(default=32, ge=1, description="Latent dimension d_z")
    channels: Tuple[int, ...] = Field(default=(16, 32, 64, 128), description="Encoder block widths")
    kernel_sizes: Tuple[int, ...] = Field(default=(7, 5, 5, 3), description="Encoder kernel sizes")
    strides: Tuple[int, ...] = Field(default=(2, 2, 2, 2), description="Stride per block")
    use_residual: bool = Field(default=True, description="Add 1x1 residual skips")
    output_kernel: int = Field(default=7, description="Kernel of the final decoder conv")

    @field_validator("kernel_sizes")
    def validate_kernels(cls, v):
        if any(k < 1 or k % 2 == 0 for k in v):
            raise ValueError("kernel sizes must be odd and positive")
        return v

    @model_validator(mode="after")
    def validate_layout(self):
        if not (len(self.channels) == len(self.kernel_sizes) == len(self.strides)):
            raise ValueError("channels, kernel_sizes and strides must have equal length")
        if not self.channels:
            raise ValueError("at least one encoder block is required")
        if any(s < 1 for s in self.strides):
            raise ValueError("strides must be positive")
        total = math.prod(self.strides)
        if self.input_len % total:
            raise ValueError(
                f"input_len {self.input_len} not divisible by product of strides {total}"
            )
        if self.output_kernel < 1 or self.output_kernel % 2 == 0:
            raise ValueError("output_kernel must be odd and positive")
        return self

    @property
    def bottleneck_len(self) -> int:
        return self.input_len // math.prod(self.strides)


class TrainConfig(BaseModel):
    """Optimization settings of one training run"""
    model_config = ConfigDict(frozen=True)

    model_kind: ModelKind = Field(default=ModelKind.WAE)
    beta: float = Field(default=1.0, ge=0, description="KL weight of the beta-VAE")
    epochs: int = Field(default=150, ge=0)
    batch_size: int = Field(default=64, ge=2)
    lr: float = Field(default=1e-3, gt=0)
    lambda_mmd: float = Field(default=0.1, ge=0, description="MMD weight lambda")
    imq_scales: Tuple[float, ...] = Field(
        default=DEFAULT_IMQ_SCALES,
        description="Multipliers s of the IMQ base scale 2*d_z",
    )
    split_ratio: float = Field(default=0.8, description="Training fraction of the 80:20 split")
    seed: int = Field(default=0, ge=0)

    @field_validator("split_ratio")
    def validate_split(cls, v):
        if not (0.0 < v < 1.0):
            raise ValueError("split_ratio must lie strictly between 0 and 1")
        return v

    @field_validator("imq_scales")
    def validate_scales(cls, v):
        if not v or any(s <= 0 for s in v):
            raise ValueError("imq_scales must be a non-empty list of positive values")
        return v


class TrainHistory(BaseModel):
    """Per-epoch losses"""
    train_loss: List[float] = Field(default_factory=list)
    reconstruction: List[float] = Field(default_factory=list)
    regularizer: List[float] = Field(default_factory=list, description="MMD^2 or KL per epoch")
    val_loss: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_lengths(self):
        n = len(self.train_loss)
        if not (len(self.reconstruction) == len(self.regularizer) == len(self.val_loss) == n):
            raise ValueError("history columns must have one entry per epoch")
        return self

    @property
    def epochs(self) -> int:
        return len(self.train_loss)

    def append(self, train: float, reconstruction: float, regularizer: float, val: float) -> None:
        self.train_loss.append(train)
        self.reconstruction.append(reconstruction)
        self.regularizer.append(regularizer)
        self.val_loss.append(val)


class TrainSummary(BaseModel):
    """Final metrics recorded in checkpoints"""
    epochs_run: int = 0
    final_train_loss: Optional[float] = None
    final_val_loss: Optional[float] = None
    test_indices: List[int] = Field(default_factory=list)
