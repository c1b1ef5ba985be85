"""
Shared fixtures for the pulseforge test suite
"""

import numpy as np
import pytest

from pulseforge.core.config import reset_settings
from pulseforge.data.models import ArchConfig, FiberProxyParams, ModelKind, TimeGrid, TrainConfig
from pulseforge.pulsegen import GenerationOptions


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Run every test in a scratch directory with freshly read settings"""
    for name in ("PULSEFORGE_THREADS", "PULSEFORGE_LOG_LEVEL", "PULSEFORGE_LOG_FORMAT", "PULSEFORGE_CONFIG_FILE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    """Seeded generator for random test inputs"""
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_arch():
    """Small encoder/decoder that trains in well under a second per epoch"""
    return ArchConfig(
        input_len=64,
        latent_dim=4,
        channels=(4, 8),
        kernel_sizes=(5, 3),
        strides=(2, 2),
        output_kernel=3,
    )


@pytest.fixture
def tiny_train_config():
    """Short WAE run on the tiny architecture"""
    return TrainConfig(model_kind=ModelKind.WAE, epochs=2, batch_size=4, lr=1e-3, seed=3)


@pytest.fixture
def small_options():
    """Generation options writing 64-sample profiles"""
    return GenerationOptions(output_grid=TimeGrid.output(64))


@pytest.fixture
def fiber():
    """Default fiber proxy"""
    return FiberProxyParams()


@pytest.fixture
def gaussian_profiles(tiny_arch):
    """Peak-normalized Gaussians of varied width and position on the tiny grid"""
    times = np.linspace(-1.0, 1.0, tiny_arch.input_len)
    widths = np.linspace(0.1, 0.4, 6)
    shifts = np.linspace(-0.3, 0.3, 4)
    rows = [np.exp(-0.5 * ((times - s) / w) ** 2) for w in widths for s in shifts]
    return np.array(rows)
