#!/usr/bin/env python3
"""
pulseforge: laser pulse shaping data, Wasserstein autoencoders and transport analysis

Synthesizes shaped pulses, learns a latent space of their intensity profiles and
interprets decoded profiles as electron emission-time distributions.
"""

__version__ = "1.0.0"
__author__ = "pulseforge Team"
__description__ = "Latent-space modeling of shaped laser pulses"

from .core.config import get_config, get_settings
from .core.log import configure_logging

__all__ = [
    "__version__",
    "__author__",
    "__description__",
    "get_config",
    "get_settings",
    "configure_logging"
]
