"""
Dataset manifest models
"""

from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from .pulse_models import DispersionUnit, FiberProxyParams, FrequencyGrid, ProfileTag, PulseSpec, TimeGrid

MANIFEST_VERSION = 1


class DatasetRecord(BaseModel):
    """One stored profile"""
    index: int = Field(..., ge=0, description="Record position in profiles.f32le")
    pair: int = Field(..., ge=0, description="Index of the input/propagated pair")
    tag: ProfileTag
    family: str = Field(..., description="Short family label, e.g. G4")
    spec: PulseSpec
    energy: float = Field(..., gt=0, description="Sum of intensity times delta_t, seconds")
    energy_normalized: float = Field(default=1.0, description="Energy over the dataset maximum")
    offset: int = Field(..., ge=0, description="Byte offset of the record")
    attempts: int = Field(default=1, ge=1, description="Draws needed to obtain a usable spec")


class DatasetManifest(BaseModel):
    """Contents of manifest.json"""
    version: int = MANIFEST_VERSION
    count: int = Field(..., ge=0, description="Number of stored profiles")
    pairs: int = Field(..., ge=0)
    master_seed: int = Field(..., ge=0)
    frequency_grid: FrequencyGrid
    synthesis_grid: TimeGrid
    output_grid: TimeGrid
    fiber: FiberProxyParams
    dispersion_unit: DispersionUnit = DispersionUnit.PICOSECONDS
    energy_max: Optional[float] = None
    records: List[DatasetRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_records(self):
        if len(self.records) != self.count:
            raise ValueError(f"manifest declares {self.count} records but lists {len(self.records)}")
        record_bytes = self.output_grid.n_points * 4
        for position, record in enumerate(self.records):
            if record.index != position or record.offset != position * record_bytes:
                raise ValueError(f"record {position} is out of order")
        return self

    @property
    def record_bytes(self) -> int:
        return self.output_grid.n_points * 4
