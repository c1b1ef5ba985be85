"""
Analysis, evaluation and geodesic settings
"""

from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field, field_validator


class AnalysisSettings(BaseModel):
    """Latent-space analysis defaults"""
    model_config = ConfigDict(frozen=True)

    components: int = Field(default=6, ge=1, description="GMM components K")
    gmm_max_iter: int = Field(default=200, ge=1)
    gmm_tol: float = Field(default=1e-6, gt=0)
    reg_covar: float = Field(default=1e-6, ge=0, description="Covariance floor added per M-step")
    cor_batches: int = Field(default=50, ge=1)
    cor_batch_size: int = Field(default=128, ge=3)
    snr_cap_db: float = Field(default=300.0)
    pca_components: int = Field(default=5, ge=1, description="Principal coordinates exported")


class GeodesicSettings(BaseModel):
    """Latent path optimization defaults"""
    model_config = ConfigDict(frozen=True)

    waypoints: int = Field(default=10, ge=2)
    steps: int = Field(default=300, ge=0)
    lr: float = Field(default=1e-2, gt=0)
    n_quad: int = Field(default=1024, ge=64, description="Midpoint nodes of the quantile integral")


class SamplingSettings(BaseModel):
    """Emission-time sampling defaults"""
    model_config = ConfigDict(frozen=True)

    particles: int = Field(default=200_000, ge=1)
    bins: int = Field(default=200, ge=1)
    count: int = Field(default=5, ge=1, description="Decoded pulses per sample run")


class EvalReport(BaseModel):
    """Reconstruction and geometry metrics of one model"""
    mse: float
    snr_db: float
    cor: float
    per_sample_mse: List[float] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("cor")
    def validate_cor(cls, v):
        if not (-1.0 - 1e-12 <= v <= 1.0 + 1e-12):
            raise ValueError("cor must lie in [-1, 1]")
        return v
