"""
Tests for the pulseforge command-line interface
"""

import json
import logging
from pathlib import Path

import pytest

from pulseforge.cli.main import build_parser, main
from pulseforge.core.exceptions import EXIT_INCONSISTENT, EXIT_IO, EXIT_OK, EXIT_USAGE

TINY_CONFIG = {
    "pulsegen": {"output_points": 64},
    "architecture": {
        "input_len": 64,
        "latent_dim": 4,
        "channels": [4, 8],
        "kernel_sizes": [5, 3],
        "strides": [2, 2],
        "output_kernel": 3,
    },
    "training": {"epochs": 2, "batch_size": 4},
    "geodesic": {"waypoints": 4, "steps": 2, "n_quad": 64},
    "sampling": {"count": 2, "particles": 1000, "bins": 20},
    "analysis": {"components": 2, "cor_batches": 2, "cor_batch_size": 4, "pca_components": 2, "gmm_max_iter": 50},
}


@pytest.fixture(autouse=True)
def tiny_config(tmp_path):
    """Write a configuration file that keeps every command small"""
    (tmp_path / "pulseforge.json").write_text(json.dumps(TINY_CONFIG))
    yield
    root = logging.getLogger("pulseforge")
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.propagate = True


def _output(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestParser:
    """Test argument parsing"""

    def test_missing_required_flag(self):
        """Test that argparse exits with the usage code"""
        with pytest.raises(SystemExit) as exc:
            main(["generate", "--pairs", "2"])
        assert exc.value.code == EXIT_USAGE

    def test_bad_boolean(self):
        """Test that --optimize takes true or false"""
        with pytest.raises(SystemExit) as exc:
            main(["interpolate", "--model", "m", "--optimize", "maybe", "--out", "o"])
        assert exc.value.code == EXIT_USAGE

    def test_unknown_command(self):
        """Test that subcommands are validated"""
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["serve"])
        assert exc.value.code == EXIT_USAGE

    def test_boolean_spellings(self):
        """Test the accepted spellings of --optimize"""
        parser = build_parser()
        args = parser.parse_args(["interpolate", "--model", "m", "--optimize", "False", "--out", "o"])
        assert args.optimize is False
        args = parser.parse_args(["interpolate", "--model", "m", "--optimize", "1", "--out", "o"])
        assert args.optimize is True


class TestExitCodes:
    """Test that failures map to documented exit codes"""

    def test_invalid_pair_count(self):
        """Test that zero pairs is a usage error"""
        assert main(["generate", "--pairs", "0", "--out", "ds"]) == EXIT_USAGE

    def test_invalid_training_value(self):
        """Test that out-of-range training flags are usage errors"""
        assert main(["train", "--data", "ds", "--epochs", "-1", "--out", "run"]) == EXIT_USAGE

    def test_missing_dataset(self):
        """Test that a missing dataset is an I/O error"""
        assert main(["eval", "--data", "absent", "--model", "absent.pfwm", "--out", "report.json"]) == EXIT_IO

    def test_incomplete_run_directory(self, tmp_path):
        """Test that export-plots needs a complete run"""
        (tmp_path / "run").mkdir()
        assert main(["export-plots", "--run", "run", "--out", "plots"]) == EXIT_INCONSISTENT


class TestCommands:
    """Test the subcommands end to end on a tiny dataset"""

    def test_generate_is_deterministic(self, tmp_path, capsys):
        """Test that equal seeds write byte-identical datasets"""
        assert main(["generate", "--pairs", "3", "--seed", "7", "--out", "first"]) == EXIT_OK
        summary = _output(capsys)
        assert summary["count"] == 6
        assert main(["generate", "--pairs", "3", "--seed", "7", "--threads", "2", "--out", "second"]) == EXIT_OK
        for name in ("manifest.json", "profiles.f32le"):
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()
        assert (tmp_path / "first" / "run_config.json").exists()
        assert (tmp_path / "first" / "pulseforge.log").exists()

    def test_train_is_deterministic(self, tmp_path):
        """Test that equal seeds write byte-identical checkpoints and histories"""
        assert main(["generate", "--pairs", "6", "--seed", "2", "--out", "ds"]) == EXIT_OK
        assert main(["train", "--data", "ds", "--seed", "4", "--out", "first"]) == EXIT_OK
        assert main(["train", "--data", "ds", "--seed", "4", "--out", "second"]) == EXIT_OK
        for name in ("model.pfwm", "history.csv", "split.json"):
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()

    def test_workflow(self, tmp_path, capsys):
        """Test generate, train, eval, interpolate, gmm, sample and export-plots in sequence"""
        assert main(["generate", "--pairs", "10", "--seed", "3", "--out", "ds"]) == EXIT_OK
        capsys.readouterr()

        assert main(["train", "--data", "ds", "--out", "run"]) == EXIT_OK
        trained = _output(capsys)
        assert trained["epochs"] == 2
        assert trained["train_size"] + trained["test_size"] == 20
        for name in ("model.pfwm", "history.csv", "split.json", "run_config.json", "pulseforge.log"):
            assert (tmp_path / "run" / name).exists()

        assert main(["eval", "--data", "ds", "--model", "run", "--out", "eval/report.json"]) == EXIT_OK
        report = _output(capsys)
        assert report["test_size"] == trained["test_size"]
        assert -1.0 <= report["cor"] <= 1.0
        assert (tmp_path / "eval" / "report.csv").exists()

        assert main([
            "interpolate", "--model", "run", "--data", "ds", "--from", "0", "--to", "1", "--out", "interp",
        ]) == EXIT_OK
        paths = _output(capsys)
        assert set(paths) == {"waypoints", "linear", "optimized"}
        assert Path("interp/optimized_profiles.csv").exists()

        assert main(["gmm", "--model", "run", "--data", "ds", "--out", "gmm"]) == EXIT_OK
        mixture = _output(capsys)
        assert mixture["components"] == 2

        assert main(["sample", "--model", "run", "--gmm", "gmm/gmm.json", "--out", "sample"]) == EXIT_OK
        sampled = _output(capsys)
        assert sampled["count"] == 2
        assert Path("sample/emission_001.txt").exists()

        assert main(["export-plots", "--run", "run", "--out", "plots"]) == EXIT_OK
        svgs = _output(capsys)["svg"]
        assert len(svgs) == 4
        assert Path(svgs[-1]).name == "loss_curve.svg"
        assert all(Path(p).exists() for p in svgs)

    def test_eval_into_the_run_keeps_the_training_record(self, tmp_path, capsys):
        """Test that a report written inside the run directory gets its own record"""
        assert main(["generate", "--pairs", "10", "--out", "ds"]) == EXIT_OK
        assert main(["train", "--data", "ds", "--epochs", "1", "--out", "run"]) == EXIT_OK
        record = tmp_path / "run" / "run_config.json"
        before = record.read_bytes()

        assert main(["eval", "--data", "ds", "--model", "run", "--out", "run/report.json"]) == EXIT_OK
        assert record.read_bytes() == before
        assert json.loads(before)["command"] == "train"
        eval_record = json.loads((tmp_path / "run" / "report.run_config.json").read_text())
        assert eval_record["command"] == "eval"

        capsys.readouterr()
        assert main(["export-plots", "--run", "run", "--out", "plots"]) == EXIT_OK

    def test_interpolate_index_out_of_range(self, capsys):
        """Test that profile indices are checked against the dataset"""
        assert main(["generate", "--pairs", "4", "--out", "ds"]) == EXIT_OK
        assert main(["train", "--data", "ds", "--epochs", "1", "--out", "run"]) == EXIT_OK
        capsys.readouterr()
        assert main([
            "interpolate", "--model", "run", "--data", "ds", "--from", "0", "--to", "99", "--out", "interp",
        ]) == EXIT_USAGE

    @pytest.mark.slow
    def test_compare(self, tmp_path, capsys):
        """Test the WAE, beta-VAE and PCA comparison table"""
        assert main(["generate", "--pairs", "10", "--out", "ds"]) == EXIT_OK
        capsys.readouterr()
        assert main(["compare", "--data", "ds", "--epochs", "1", "--out", "cmp"]) == EXIT_OK
        table = _output(capsys)
        assert set(table) == {"wae", "bvae-1", "bvae-0.7", "bvae-0.5", "pca-4"}
        assert (tmp_path / "cmp" / "comparison.csv").exists()
