#!/usr/bin/env python3
"""
Configuration management for pulseforge
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..data.models import (
    AnalysisSettings, ArchConfig, DispersionUnit, FiberProxyParams, FrequencyGrid,
    GeodesicSettings, SamplingSettings, TrainConfig
)

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Runtime settings with environment variable support"""
    model_config = SettingsConfigDict(
        env_prefix="PULSEFORGE_", env_file=".env", case_sensitive=False, extra="ignore"
    )

    # Runtime
    threads: int = Field(default=1, ge=1, description="Cap on internal parallelism")

    # Logging
    log_level: str = Field(default="INFO")
    log_format: str = Field(default="text")

    # Overrides file
    config_file: Optional[str] = Field(default="pulseforge.json")

    @field_validator("log_format")
    def validate_log_format(cls, v):
        if v not in ("text", "json"):
            raise ValueError("log_format must be 'text' or 'json'")
        return v


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get runtime settings singleton"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the environment is read again"""
    global _settings
    _settings = None


def _load_overrides(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    config_file = Path(path)
    if not config_file.exists():
        return {}
    try:
        with open(config_file, encoding="utf-8") as f:
            data = json.load(f)
    except (json.JSONDecodeError, OSError) as e:
        logger.warning(f"Ignoring unreadable config file {config_file}: {e}")
        return {}
    if not isinstance(data, dict):
        logger.warning(f"Ignoring config file {config_file}: top level is not an object")
        return {}
    return data


def get_config() -> Dict[str, Any]:
    """Get configuration as dictionary"""
    settings = get_settings()
    file_config = _load_overrides(settings.config_file)

    config: Dict[str, Any] = {
        "pulsegen": {
            "frequency_grid": FrequencyGrid().model_dump(),
            "output_points": 512,
            "output_span": 40e-12,
            "support_span": 30e-12,
            "support_threshold": 1e-3,
            "dispersion_unit": DispersionUnit.PICOSECONDS.value,
            "max_attempts": 8,
        },
        "fiber": FiberProxyParams().model_dump(),
        "architecture": ArchConfig().model_dump(),
        "training": TrainConfig().model_dump(mode="json"),
        "geodesic": GeodesicSettings().model_dump(),
        "sampling": SamplingSettings().model_dump(),
        "analysis": AnalysisSettings().model_dump(),
        "runtime": {
            "threads": settings.threads,
        },
        "logging": {
            "level": settings.log_level,
            "format": settings.log_format,
        },
    }

    # Update with file config if available
    for key, value in file_config.items():
        if key in config and isinstance(value, dict) and isinstance(config[key], dict):
            config[key].update(value)
        else:
            config[key] = value

    return config
