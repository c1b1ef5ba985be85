"""
Tests for the service layer and input validation
"""

import json

import numpy as np
import pytest

from pulseforge.cli.plots import render_plots
from pulseforge.core.exceptions import CorruptFileError, InconsistentArtifactError, UsageError
from pulseforge.data.models import AnalysisSettings, GeodesicSettings, SamplingSettings, TrainConfig
from pulseforge.data.services import AnalysisService, DatasetService, RunService
from pulseforge.data.validation import DataValidator
from pulseforge.latent import GmmModel
from pulseforge.models import encode_mean, train


@pytest.fixture
def dataset(tmp_path, fiber, small_options):
    """Six pulse pairs on the small grid, with their manifest and profiles"""
    out = tmp_path / "dataset"
    service = DatasetService()
    service.generate(6, 21, out, fiber, small_options)
    manifest, profiles = service.load(out)
    return out, manifest, profiles


@pytest.fixture
def trained(gaussian_profiles, tiny_arch):
    """Tiny WAE after a few epochs on Gaussian profiles"""
    return train(gaussian_profiles, tiny_arch, TrainConfig(epochs=3, batch_size=4, seed=0))


@pytest.fixture
def settings():
    """Analysis settings small enough for the tiny datasets"""
    return AnalysisSettings(cor_batches=2, cor_batch_size=4, pca_components=2, gmm_max_iter=50)


class TestDataValidator:
    """Test request and artifact validation"""

    def test_generate_request(self):
        """Test generation flags"""
        assert DataValidator.validate_generate_request(10, 0, 1) == []
        errors = DataValidator.validate_generate_request(0, -1, 0)
        assert len(errors) == 3

    def test_profiles(self):
        """Test profile matrices"""
        assert DataValidator.validate_profiles(np.zeros((4, 8)), 8) == []
        assert DataValidator.validate_profiles(np.zeros(8), 8)
        bad = np.zeros((1, 6))
        bad[0, 0] = np.nan
        assert len(DataValidator.validate_profiles(bad, 8)) == 3

    def test_split(self):
        """Test stored held-out indices"""
        assert DataValidator.validate_split([0, 3], 4) == []
        assert DataValidator.validate_split([], 4)
        assert len(DataValidator.validate_split([1, 1, 9], 4)) == 2

    def test_gmm_document(self):
        """Test GMM JSON documents"""
        good = {"weights": [0.5, 0.5], "means": [[0.0], [1.0]], "covariances": [[[1.0]], [[1.0]]]}
        assert DataValidator.validate_gmm_document(good) == []
        assert DataValidator.validate_gmm_document([]) == ["GMM document must be a JSON object"]
        assert DataValidator.validate_gmm_document({"weights": [0.2, 0.2]})

    def test_indices(self):
        """Test named profile indices"""
        assert DataValidator.validate_indices({"from": 0, "to": 3}, 4) == []
        assert DataValidator.validate_indices({"from": 4}, 4) == ["from index 4 out of range [0, 4)"]


class TestDatasetService:
    """Test dataset generation and reading"""

    def test_generate_and_summarize(self, dataset):
        """Test the stored dataset and its summary"""
        _, manifest, profiles = dataset
        assert profiles.dtype == np.float64
        assert profiles.shape == (12, 64)
        service = DatasetService()
        summary = service.summary(manifest)
        assert summary["count"] == 12
        assert sum(summary["families"].values()) == 12
        assert service.energies(manifest).max() == 1.0
        assert len(service.families(manifest)) == len(service.tags(manifest)) == 12

    def test_invalid_request(self, tmp_path):
        """Test that invalid flags are usage errors"""
        with pytest.raises(UsageError, match="pairs must be at least 1"):
            DatasetService().generate(0, 0, tmp_path / "ds")
        with pytest.raises(UsageError, match="threads"):
            DatasetService().generate(1, 0, tmp_path / "ds", threads=0)


class TestRunService:
    """Test run bookkeeping"""

    def test_save_training(self, tmp_path, trained):
        """Test checkpoint, history and split of a run"""
        runs = RunService()
        directory = runs.save_training(tmp_path / "run", trained, TrainConfig(epochs=3, batch_size=4))
        for name in ("model.pfwm", "history.csv", "split.json"):
            assert (directory / name).exists()
        params = runs.load_model(directory)
        np.testing.assert_array_equal(runs.held_out(params, 24), trained.split.test)

    def test_held_out_beyond_dataset(self, tmp_path, trained):
        """Test that a smaller dataset than the training one is inconsistent"""
        runs = RunService()
        runs.save_training(tmp_path / "run", trained, TrainConfig(epochs=3, batch_size=4))
        params = runs.load_model(tmp_path / "run")
        with pytest.raises(InconsistentArtifactError):
            runs.held_out(params, 2)

    def test_record(self, tmp_path):
        """Test the provenance document"""
        runs = RunService()
        runs.record(tmp_path, "generate", 5, inputs={"data": tmp_path / "ds"}, params={"pairs": 3})
        config = runs.load_config(tmp_path)
        assert config.command == "generate"
        assert config.master_seed == 5
        assert config.inputs["data"] == str(tmp_path / "ds")


class TestAnalysisService:
    """Test evaluation, mixtures, sampling, paths and plot exports"""

    def test_evaluate(self, tmp_path, trained, gaussian_profiles, settings):
        """Test the report JSON and per-sample CSV"""
        out = tmp_path / "report.json"
        energies = gaussian_profiles.sum(axis=1)
        report = AnalysisService().evaluate(
            trained.params, gaussian_profiles, trained.split.test, out, energies, settings
        )
        document = json.loads(out.read_text())
        assert document["mse"] == report.mse
        assert document["details"]["test_size"] == len(trained.split.test)
        lines = out.with_suffix(".csv").read_text().splitlines()
        assert lines[0] == "index,mse,snr_db"
        assert len(lines) == 1 + len(trained.split.test)

    def test_fit_and_load_gmm(self, tmp_path, trained, gaussian_profiles, settings, small_options):
        """Test the mixture exports and reloading the mixture"""
        service = AnalysisService()
        summary = service.fit_gmm(trained.params, gaussian_profiles, 2, tmp_path, 0, settings, small_options)
        for name in ("gmm.json", "decoded_means.csv", "assignments.csv", "w2_matrix.csv"):
            assert (tmp_path / name).exists()
        assert len(summary["labels"]) == 2
        assert len(summary["row_mean_w2"]) == 2
        gmm = service.load_gmm(tmp_path / "gmm.json")
        assert gmm.n_components == 2
        assert gmm.dim == trained.params.arch.latent_dim

    def test_load_invalid_gmm(self, tmp_path):
        """Test that malformed mixtures are corrupt artifacts"""
        path = tmp_path / "gmm.json"
        path.write_text(json.dumps({"weights": [1.0]}))
        with pytest.raises(CorruptFileError):
            AnalysisService().load_gmm(path)

    def test_sample(self, tmp_path, trained):
        """Test emission-time exports per decoded pulse"""
        settings = SamplingSettings(count=2, particles=2000, bins=20)
        summary = AnalysisService().sample(trained.params, tmp_path, seed=4, settings=settings)
        assert len(summary["histogram_l1"]) == 2
        times = np.loadtxt(tmp_path / "emission_000.txt")
        assert times.shape == (2000,)
        assert len((tmp_path / "histogram_001.csv").read_text().splitlines()) == 21
        assert (tmp_path / "codes.csv").exists()

    def test_sample_rejects_mismatched_gmm(self, tmp_path, trained):
        """Test that the mixture must live in the model's latent space"""
        gmm = GmmModel(weights=np.ones(1), means=np.zeros((1, 2)), covariances=np.eye(2)[None])
        with pytest.raises(CorruptFileError):
            AnalysisService().sample(trained.params, tmp_path, gmm=gmm)

    def test_interpolate(self, tmp_path, trained, gaussian_profiles):
        """Test the linear and optimized path exports"""
        z = encode_mean(trained.params, gaussian_profiles[[0, 23]])
        settings = GeodesicSettings(waypoints=4, steps=3, n_quad=64)
        summary = AnalysisService().interpolate(trained.params, z[0], z[1], tmp_path, True, settings)
        assert summary["waypoints"] == 4
        assert summary["optimized"]["length"] <= summary["linear"]["length"] + 1e-9
        for name in ("linear_waypoints.csv", "linear_profiles.csv", "optimized_waypoints.csv", "summary.json"):
            assert (tmp_path / name).exists()

    def test_path_statistics(self, tmp_path, trained, gaussian_profiles):
        """Test ratio statistics over random code pairs"""
        codes = encode_mean(trained.params, gaussian_profiles)
        settings = GeodesicSettings(waypoints=4, steps=2, n_quad=64)
        stats = AnalysisService().path_statistics(trained.params, codes, 2, tmp_path, 1, settings)
        assert len(stats["pairs"]) == 2
        assert (tmp_path / "statistics.json").exists()

    def test_export_plot_data(self, tmp_path, dataset, tiny_arch, small_options, settings):
        """Test the plot CSVs and their SVG renderings"""
        _, manifest, profiles = dataset
        result = train(profiles, tiny_arch, TrainConfig(epochs=1, batch_size=4))
        out = tmp_path / "plots"
        bundle = AnalysisService().export_plot_data(
            result.params, manifest, profiles, result.split.test.tolist(), out, small_options, settings
        )
        for name in ("pca_scatter.csv", "trajectories.csv", "reconstructions.csv", "filmstrip.csv"):
            assert (out / name).exists()
        assert bundle.coords.shape == (12, 2)
        assert bundle.filmstrip.shape == (10, 64)
        paths = render_plots(out, bundle)
        assert [p.name for p in paths] == ["pca_scatter.svg", "reconstructions.svg", "filmstrip.svg"]
        assert all(p.read_text().lstrip().startswith("<?xml") for p in paths)
