"""
Resolved per-run configuration written next to every output
"""

from typing import Any, Dict

from pydantic import BaseModel, Field


class RunConfig(BaseModel):
    """Provenance record of one CLI invocation"""
    command: str = Field(..., description="Subcommand name")
    version: str = Field(..., description="Package version")
    master_seed: int = Field(default=0, ge=0)
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input paths")
    output: str = Field(..., description="Output path")
    params: Dict[str, Any] = Field(default_factory=dict, description="Resolved parameters")
