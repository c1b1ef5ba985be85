"""
Desk-scale end-to-end checks on a trained model: training progress, the WAE against
its baselines, geodesic optimality, latent geometry and energy correlation
"""

import numpy as np
import pytest

from pulseforge.data.models import (
    AnalysisSettings, ArchConfig, FiberProxyParams, GeodesicSettings, ModelKind, TrainConfig
)
from pulseforge.data.services import DatasetService
from pulseforge.models import compare_models, encode_mean, evaluate_model, train
from pulseforge.pulsegen import GenerationOptions, canonical_profiles
from pulseforge.transport import ModelDecoder, path_statistics

pytestmark = pytest.mark.slow

DESK_PAIRS = 1000
DESK_ARCH = ArchConfig(latent_dim=32, channels=(8, 16, 32, 64))
DESK_TRAINING = TrainConfig(model_kind=ModelKind.WAE, epochs=40, lambda_mmd=0.1, batch_size=64, lr=1e-3, seed=0)
DESK_ANALYSIS = AnalysisSettings(cor_batches=10)
GEODESIC_PAIRS = 50


@pytest.fixture(scope="module")
def desk_dataset(tmp_path_factory):
    """2000 preprocessed profiles from 1000 simulated pulse pairs"""
    out = tmp_path_factory.mktemp("desk") / "dataset"
    service = DatasetService()
    service.generate(DESK_PAIRS, 0, out, FiberProxyParams(), GenerationOptions(), threads=4)
    return service.load(out)


@pytest.fixture(scope="module")
def desk_wae(desk_dataset):
    """WAE trained for 40 epochs on the desk dataset"""
    _, profiles = desk_dataset
    return train(profiles, DESK_ARCH, DESK_TRAINING)


class TestDeskTraining:
    """Test training progress and the model comparison"""

    def test_loss_halves(self, desk_wae):
        """Test that the final epoch loss is below half the first epoch loss"""
        history = desk_wae.history
        assert history.epochs == DESK_TRAINING.epochs
        assert history.train_loss[-1] < 0.5 * history.train_loss[0]

    def test_wae_beats_baselines(self, desk_dataset):
        """Test that held-out SNR of the WAE exceeds PCA at the latent width and a beta=1 VAE"""
        _, profiles = desk_dataset
        reports = compare_models(profiles, DESK_ARCH, DESK_TRAINING, betas=(1.0,), settings=DESK_ANALYSIS)
        assert set(reports) == {"wae", "bvae-1", "pca-32"}
        assert reports["wae"].snr_db > reports["pca-32"].snr_db
        assert reports["wae"].snr_db > reports["bvae-1"].snr_db


class TestDeskGeometry:
    """Test latent-space properties of the trained decoder"""

    def test_geodesics_improve_on_linear_paths(self, desk_dataset, desk_wae):
        """Test optimality ratios over random held-out endpoint pairs"""
        _, profiles = desk_dataset
        params = desk_wae.params
        rng = np.random.default_rng(5)
        test = desk_wae.split.test
        pairs = [rng.choice(test, size=2, replace=False) for _ in range(GEODESIC_PAIRS)]
        codes = [encode_mean(params, profiles[pair]) for pair in pairs]
        settings = GeodesicSettings(waypoints=10, steps=50, n_quad=256)

        stats = path_statistics([(z[0], z[1]) for z in codes], ModelDecoder(params), settings)
        records = stats["pairs"]
        assert len(records) == GEODESIC_PAIRS
        for record in records:
            assert record["linear_ratio"] >= 1.0 - 1e-6
            assert record["optimized_ratio"] >= 1.0 - 1e-6
            assert record["optimized_length"] <= record["linear_length"] + 1e-6
        assert stats["optimized_ratio_mean"] <= stats["linear_ratio_mean"]

    def test_super_gaussians_approach_the_flattop_region(self, desk_dataset, desk_wae):
        """Test that higher Gaussian orders embed closer to the flattop centroid"""
        manifest, profiles = desk_dataset
        params = desk_wae.params
        families = np.array(DatasetService().families(manifest))
        flattop_centroid = encode_mean(params, profiles[families == "F"]).mean(axis=0)

        shapes = canonical_profiles()
        gaussians = np.stack([shapes["G1"].values, shapes["G10"].values])
        distances = np.linalg.norm(encode_mean(params, gaussians) - flattop_centroid, axis=1)
        assert distances[1] < distances[0]

    def test_energy_is_linearly_encoded(self, desk_dataset, desk_wae):
        """Test that a leading principal coordinate correlates strongly with pulse energy"""
        manifest, profiles = desk_dataset
        test = desk_wae.split.test
        energies = DatasetService().energies(manifest)[test]
        report = evaluate_model(desk_wae.params, profiles[test], DESK_ANALYSIS, energies=energies)
        correlations = np.abs(report.details["energy_correlation"])
        assert correlations.max() > 0.6
