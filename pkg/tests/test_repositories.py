"""
Tests for the artifact repositories: datasets, checkpoints, exports and run directories
"""

import json

import numpy as np
import pytest

from pulseforge.core.exceptions import (
    ArtifactIOError, CorruptFileError, InconsistentArtifactError, VersionMismatchError
)
from pulseforge.data.models import RunConfig, TrainHistory
from pulseforge.data.repositories import (
    CheckpointRepository, DatasetRepository, ExportRepository, FileOperations, RunRepository
)
from pulseforge.data.repositories.dataset_repository import MANIFEST_FILE, PROFILES_FILE
from pulseforge.data.repositories.export_repository import format_value
from pulseforge.data.repositories.run_repository import CHECKPOINT_FILE
from pulseforge.pulsegen import generate_dataset


@pytest.fixture
def dataset_dir(tmp_path, fiber, small_options):
    """Two pulse pairs written with the small output grid"""
    out = tmp_path / "dataset"
    generate_dataset(2, 11, fiber, out, small_options)
    return out


class TestDatasetRepository:
    """Test manifest and profile storage"""

    def test_round_trip(self, dataset_dir):
        """Test that stored profiles come back with their manifest"""
        manifest, profiles = DatasetRepository().load(dataset_dir)
        assert manifest.count == 4
        assert profiles.shape == (4, 64)
        assert profiles.dtype == np.float32
        assert (dataset_dir / PROFILES_FILE).stat().st_size == 4 * manifest.record_bytes

    def test_save_rejects_wrong_shape(self, dataset_dir, tmp_path):
        """Test that profiles must match the manifest"""
        repository = DatasetRepository()
        manifest, profiles = repository.load(dataset_dir)
        with pytest.raises(CorruptFileError):
            repository.save(tmp_path / "copy", manifest, profiles[:3])

    def test_truncated_profiles(self, dataset_dir):
        """Test that a short profile file is reported"""
        path = dataset_dir / PROFILES_FILE
        path.write_bytes(path.read_bytes()[:-4])
        with pytest.raises(CorruptFileError):
            DatasetRepository().load(dataset_dir)

    def test_unsupported_manifest_version(self, dataset_dir):
        """Test that other manifest versions are refused"""
        path = dataset_dir / MANIFEST_FILE
        data = json.loads(path.read_text())
        data["version"] = 99
        path.write_text(json.dumps(data))
        with pytest.raises(VersionMismatchError):
            DatasetRepository().load_manifest(dataset_dir)

    def test_malformed_manifest(self, dataset_dir):
        """Test that broken JSON is a corrupt artifact"""
        (dataset_dir / MANIFEST_FILE).write_text("{not json")
        with pytest.raises(CorruptFileError):
            DatasetRepository().load_manifest(dataset_dir)

    def test_invalid_manifest_fields(self, dataset_dir):
        """Test that schema violations are a corrupt artifact"""
        path = dataset_dir / MANIFEST_FILE
        data = json.loads(path.read_text())
        data["count"] = -1
        path.write_text(json.dumps(data))
        with pytest.raises(CorruptFileError):
            DatasetRepository().load_manifest(dataset_dir)

    def test_missing_directory(self, tmp_path):
        """Test that an absent dataset is an I/O error"""
        with pytest.raises(ArtifactIOError):
            DatasetRepository().load(tmp_path / "nowhere")


class TestCheckpointRepository:
    """Test the binary checkpoint container"""

    def test_encode_decode(self):
        """Test that header and tensors survive encoding"""
        repository = CheckpointRepository()
        tensors = [("a", np.arange(6, dtype=np.float32).reshape(2, 3)), ("b", np.ones(4, dtype=np.float32))]
        header, decoded = repository.decode(repository.encode({"kind": "wae"}, tensors))
        assert header["kind"] == "wae"
        assert [entry["name"] for entry in header["tensors"]] == ["a", "b"]
        np.testing.assert_array_equal(decoded["a"], tensors[0][1])
        np.testing.assert_array_equal(decoded["b"], tensors[1][1])

    def test_encoding_is_deterministic(self):
        """Test that equal inputs give equal bytes"""
        repository = CheckpointRepository()
        tensors = [("w", np.linspace(0.0, 1.0, 5, dtype=np.float32))]
        assert repository.encode({"x": 1, "y": 2}, tensors) == repository.encode({"y": 2, "x": 1}, tensors)

    def test_trailing_bytes(self):
        """Test that extra payload after the last tensor is rejected"""
        repository = CheckpointRepository()
        payload = repository.encode({}, [("w", np.ones(2, dtype=np.float32))]) + b"\x00"
        with pytest.raises(CorruptFileError):
            repository.decode(payload)

    def test_short_prefix(self):
        """Test that a payload shorter than the prefix is rejected"""
        with pytest.raises(CorruptFileError):
            CheckpointRepository().decode(b"PF")


class TestExportRepository:
    """Test CSV and text exports"""

    def test_cell_formatting(self):
        """Test locale-independent cell text"""
        assert format_value(True) == "true"
        assert format_value(np.int64(3)) == "3"
        assert format_value(0.1) == "0.1"
        assert format_value(np.float32(0.5)) == "0.5"
        assert format_value("G4") == "G4"

    def test_csv_round_trip(self, tmp_path):
        """Test that rows written as CSV read back by header"""
        exports = ExportRepository()
        path = tmp_path / "nested" / "table.csv"
        assert exports.write_csv(path, ["index", "value"], [(0, 1.5), (1, -2.0)]) == 2
        rows = exports.read_csv(path)
        assert rows == [{"index": "0", "value": "1.5"}, {"index": "1", "value": "-2.0"}]

    def test_matrix_header(self, tmp_path):
        """Test generated column names"""
        exports = ExportRepository()
        path = tmp_path / "codes.csv"
        exports.write_matrix(path, np.zeros((2, 3)), prefix="z")
        assert path.read_text().splitlines()[0] == "z0,z1,z2"

    def test_emission_times(self, tmp_path):
        """Test one scientific-notation value per line"""
        exports = ExportRepository()
        times = np.array([-1.234567891e-12, 0.0, 5e-13])
        path = tmp_path / "emission.txt"
        exports.write_emission_times(path, times)
        assert path.read_text().splitlines()[0] == "-1.234567891e-12"
        np.testing.assert_allclose(exports.read_emission_times(path), times, rtol=1e-9)


class TestRunRepository:
    """Test run-directory bookkeeping"""

    def test_config_round_trip(self, tmp_path):
        """Test the resolved configuration document"""
        repository = RunRepository()
        config = RunConfig(command="train", version="1.0.0", master_seed=3, inputs={"data": "ds"}, output="run")
        repository.save_config(tmp_path, config)
        assert repository.load_config(tmp_path) == config

    def test_named_config_leaves_the_default_alone(self, tmp_path):
        """Test that a record saved under its own name does not replace run_config.json"""
        repository = RunRepository()
        train = RunConfig(command="train", version="1.0.0", output="run")
        report = RunConfig(command="eval", version="1.0.0", output="run")
        repository.save_config(tmp_path, train)
        repository.save_config(tmp_path, report, name="report.run_config.json")
        assert repository.load_config(tmp_path) == train
        assert repository.load_config(tmp_path, "report.run_config.json") == report

    def test_split_round_trip(self, tmp_path):
        """Test stored train/test indices"""
        repository = RunRepository()
        repository.save_split(tmp_path, {"train": [0, 2], "test": [1]})
        assert repository.load_split(tmp_path) == {"train": [0, 2], "test": [1]}

    def test_split_without_test_indices(self, tmp_path):
        """Test that a split lacking held-out indices is inconsistent"""
        FileOperations.write_json(tmp_path / "split.json", {"train": [0]})
        with pytest.raises(InconsistentArtifactError):
            RunRepository().load_split(tmp_path)

    def test_history_round_trip(self, tmp_path):
        """Test the per-epoch CSV"""
        repository = RunRepository()
        history = TrainHistory()
        history.append(1.0, 0.75, 0.25, 1.1)
        history.append(0.5, 0.4, 0.1, 0.6)
        repository.save_history(tmp_path, history)
        assert repository.load_history(tmp_path) == history
        assert (tmp_path / "history.csv").read_text().splitlines()[0] == (
            "epoch,train_loss,reconstruction,regularizer,val_loss"
        )

    def test_checkpoint_path(self, tmp_path):
        """Test that a run directory resolves to its checkpoint"""
        repository = RunRepository()
        assert repository.checkpoint_path(tmp_path) == tmp_path / CHECKPOINT_FILE
        assert repository.checkpoint_path(tmp_path / "other.pfwm") == tmp_path / "other.pfwm"

    def test_missing_config(self, tmp_path):
        """Test that a missing document is an I/O error"""
        with pytest.raises(ArtifactIOError):
            RunRepository().load_config(tmp_path)
