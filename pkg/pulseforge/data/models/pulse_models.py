"""
Pulse shaping parameters, grids and propagation settings
"""

import math
from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SPEED_OF_LIGHT = 299_792_458.0
PICOSECOND = 1e-12

TRIANGULAR_ORDERS: Tuple[int, ...] = (1, 2, 4)
GAUSSIAN_ORDERS: Tuple[int, ...] = (1, 2, 3, 4, 5, 10)
SIGMA_T_RANGE_PS: Tuple[float, float] = (2.0, 40.0)


class EnvelopeFamily(str, Enum):
    """Envelope families available to the pulse shaper"""
    SECANT = "secant"
    PARABOLIC = "parabolic"
    FLATTOP = "flattop"
    TRIANGULAR = "triangular"
    GAUSSIAN = "gaussian"

    @property
    def letter(self) -> str:
        return self.value[0].upper()

    @property
    def orders(self) -> Tuple[int, ...]:
        """Admissible orders for this family"""
        if self is EnvelopeFamily.TRIANGULAR:
            return TRIANGULAR_ORDERS
        if self is EnvelopeFamily.GAUSSIAN:
            return GAUSSIAN_ORDERS
        return (1,)


class ProfileTag(str, Enum):
    """Position of a profile in the laser chain"""
    INPUT = "input"
    PROPAGATED = "propagated"


class DispersionUnit(str, Enum):
    """Time unit in which sigma_t enters the dispersion variances"""
    PICOSECONDS = "ps"
    SECONDS = "s"


class PulseSpec(BaseModel):
    """Sampled shaping parameters of one pulse"""
    model_config = ConfigDict(frozen=True)

    envelope: EnvelopeFamily = Field(..., description="Envelope family")
    order: int = Field(default=1, description="Order p_T or p_G; 1 for families without order")
    sigma_t: float = Field(..., description="Target temporal width in picoseconds")
    phi2: float = Field(default=0.0, description="Second-order dispersion in s^2")
    phi3: float = Field(default=0.0, description="Third-order dispersion in s^3")
    phi4: float = Field(default=0.0, description="Fourth-order dispersion in s^4")
    lambda0: float = Field(default=1030e-9, description="Central wavelength in meters")
    seed: int = Field(default=0, ge=0, description="Sub-seed the spec was drawn with")

    @field_validator("sigma_t")
    def validate_sigma_t(cls, v):
        lo, hi = SIGMA_T_RANGE_PS
        if not (lo <= v <= hi):
            raise ValueError(f"sigma_t must lie in [{lo}, {hi}] ps, got {v}")
        return v

    @field_validator("lambda0")
    def validate_lambda0(cls, v):
        if v <= 0:
            raise ValueError("lambda0 must be positive")
        return v

    @model_validator(mode="after")
    def validate_order(self):
        if self.order not in self.envelope.orders:
            raise ValueError(
                f"order {self.order} not admissible for {self.envelope.value}; "
                f"expected one of {self.envelope.orders}"
            )
        return self

    @property
    def sigma_t_seconds(self) -> float:
        return self.sigma_t * PICOSECOND

    @property
    def omega0(self) -> float:
        """Central angular frequency in rad/s"""
        return 2.0 * math.pi * SPEED_OF_LIGHT / self.lambda0

    @property
    def label(self) -> str:
        """Short family label such as G4, T2 or F"""
        if len(self.envelope.orders) > 1:
            return f"{self.envelope.letter}{self.order}"
        return self.envelope.letter


class TimeGrid(BaseModel):
    """Uniform time axis; all values in seconds"""
    model_config = ConfigDict(frozen=True)

    n_points: int = Field(default=512, ge=2)
    delta_t: float = Field(..., gt=0)
    t_min: float = Field(...)
    t_max: float = Field(...)

    @model_validator(mode="after")
    def validate_span(self):
        expected = (self.n_points - 1) * self.delta_t
        if not math.isclose(self.t_max - self.t_min, expected, rel_tol=1e-9, abs_tol=1e-30):
            raise ValueError(
                f"t_max - t_min must equal (n_points - 1) * delta_t ({expected}), "
                f"got {self.t_max - self.t_min}"
            )
        return self

    @classmethod
    def centered(cls, n_points: int, delta_t: float) -> "TimeGrid":
        """Grid symmetric about t = 0"""
        half = 0.5 * (n_points - 1) * delta_t
        return cls(n_points=n_points, delta_t=delta_t, t_min=-half, t_max=half)

    @classmethod
    def output(cls, n_points: int = 512, span: float = 40e-12) -> "TimeGrid":
        """Standard 512-sample output grid spanning 40 ps"""
        return cls.centered(n_points, span / n_points)

    @property
    def center(self) -> float:
        return 0.5 * (self.t_min + self.t_max)

    def times(self) -> np.ndarray:
        return self.t_min + self.delta_t * np.arange(self.n_points, dtype=np.float64)


class FrequencyGrid(BaseModel):
    """Angular-frequency grid the spectral fields live on"""
    model_config = ConfigDict(frozen=True)

    n_points: int = Field(default=8192, description="Number of spectral samples")
    delta_omega: float = Field(default=1.041e9, gt=0, description="Spacing in rad/s")
    omega0: float = Field(
        default=2.0 * math.pi * SPEED_OF_LIGHT / 1030e-9,
        description="Central angular frequency in rad/s",
    )

    @field_validator("n_points")
    def validate_power_of_two(cls, v):
        if v < 2 or v & (v - 1):
            raise ValueError(f"n_points must be a power of two, got {v}")
        return v

    def detuning(self) -> np.ndarray:
        """omega - omega0 on the grid, ascending, zero at index n/2"""
        k = np.arange(self.n_points, dtype=np.float64) - self.n_points // 2
        return k * self.delta_omega

    def omegas(self) -> np.ndarray:
        return self.omega0 + self.detuning()

    def synthesis_grid(self) -> TimeGrid:
        """Time grid conjugate to this frequency grid, with t = 0 at index n/2"""
        delta_t = 2.0 * math.pi / (self.n_points * self.delta_omega)
        t_min = -(self.n_points // 2) * delta_t
        return TimeGrid(
            n_points=self.n_points,
            delta_t=delta_t,
            t_min=t_min,
            t_max=t_min + (self.n_points - 1) * delta_t,
        )


class FiberProxyParams(BaseModel):
    """Split-step fiber stand-in for the front-end propagation"""
    model_config = ConfigDict(frozen=True)

    beta2: float = Field(default=20e-27, description="Group-velocity dispersion in s^2/m")
    gamma_nl: float = Field(
        default=1.0,
        description="Nonlinearity in 1/(W m); unit-peak inputs over 1 m pick up about 1 rad",
    )
    length: float = Field(default=1.0, ge=0, description="Fiber length in meters")
    n_steps: int = Field(default=64, ge=1, description="Number of split steps")
