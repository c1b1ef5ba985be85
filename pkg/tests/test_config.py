"""
Tests for settings, configuration overrides and logging setup
"""

import json
import logging

import pytest
from pydantic import ValidationError

from pulseforge.core.config import Settings, get_config, get_settings, reset_settings
from pulseforge.core.log import SIDECAR_NAME, configure_logging


@pytest.fixture
def restore_logging():
    """Put the package logger back after a test reconfigures it"""
    yield
    root = logging.getLogger("pulseforge")
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.propagate = True
    root.setLevel(logging.NOTSET)


class TestSettings:
    """Test environment-backed settings"""

    def test_defaults(self):
        """Test settings without environment overrides"""
        settings = get_settings()
        assert settings.threads == 1
        assert settings.log_level == "INFO"
        assert settings.log_format == "text"
        assert settings.config_file == "pulseforge.json"

    def test_environment_overrides(self, monkeypatch):
        """Test PULSEFORGE_* variables"""
        monkeypatch.setenv("PULSEFORGE_THREADS", "4")
        monkeypatch.setenv("PULSEFORGE_LOG_FORMAT", "json")
        reset_settings()
        settings = get_settings()
        assert settings.threads == 4
        assert settings.log_format == "json"

    def test_settings_are_cached(self, monkeypatch):
        """Test that the singleton is read once until reset"""
        first = get_settings()
        monkeypatch.setenv("PULSEFORGE_THREADS", "8")
        assert get_settings() is first
        reset_settings()
        assert get_settings().threads == 8

    def test_invalid_values(self):
        """Test validation of thread count and log format"""
        with pytest.raises(ValidationError):
            Settings(threads=0)
        with pytest.raises(ValidationError):
            Settings(log_format="xml")


class TestConfig:
    """Test the merged configuration dictionary"""

    def test_sections(self):
        """Test that every section is present with its defaults"""
        config = get_config()
        for section in ("pulsegen", "fiber", "architecture", "training", "geodesic", "sampling", "analysis"):
            assert section in config
        assert config["pulsegen"]["output_points"] == 512
        assert config["pulsegen"]["dispersion_unit"] == "ps"
        assert config["training"]["batch_size"] == 64
        assert config["runtime"]["threads"] == 1

    def test_file_overrides_merge_per_section(self, tmp_path):
        """Test that a pulseforge.json in the working directory updates single keys"""
        (tmp_path / "pulseforge.json").write_text(json.dumps({
            "training": {"epochs": 3},
            "sampling": {"particles": 100},
        }))
        config = get_config()
        assert config["training"]["epochs"] == 3
        assert config["training"]["batch_size"] == 64
        assert config["sampling"]["particles"] == 100

    def test_config_file_from_environment(self, tmp_path, monkeypatch):
        """Test PULSEFORGE_CONFIG_FILE"""
        path = tmp_path / "custom.json"
        path.write_text(json.dumps({"geodesic": {"waypoints": 5}}))
        monkeypatch.setenv("PULSEFORGE_CONFIG_FILE", str(path))
        reset_settings()
        assert get_config()["geodesic"]["waypoints"] == 5

    @pytest.mark.parametrize("content", ["{broken", "[1, 2]"])
    def test_unusable_file_is_ignored(self, tmp_path, content):
        """Test that unreadable or non-object files fall back to defaults"""
        (tmp_path / "pulseforge.json").write_text(content)
        assert get_config()["training"]["epochs"] == 150


class TestLogging:
    """Test logger configuration"""

    def test_text_sidecar(self, tmp_path, restore_logging):
        """Test that records are mirrored into the sidecar file"""
        configure_logging("DEBUG", "text", sidecar=tmp_path)
        logging.getLogger("pulseforge.test").info("hello sidecar")
        for handler in logging.getLogger("pulseforge").handlers:
            handler.flush()
        content = (tmp_path / SIDECAR_NAME).read_text()
        assert "pulseforge.test - INFO - hello sidecar" in content

    def test_json_format(self, tmp_path, restore_logging):
        """Test one JSON object per record"""
        path = tmp_path / "run.log"
        configure_logging("INFO", "json", sidecar=path)
        logging.getLogger("pulseforge.test").warning("structured")
        logging.getLogger("pulseforge.test").debug("dropped")
        for handler in logging.getLogger("pulseforge").handlers:
            handler.flush()
        lines = path.read_text().splitlines()
        assert len(lines) == 1
        record = json.loads(lines[0])
        assert record["level"] == "WARNING"
        assert record["message"] == "structured"
        assert record["logger"] == "pulseforge.test"

    def test_reconfiguring_replaces_handlers(self, tmp_path, restore_logging):
        """Test that repeated setup does not stack handlers"""
        configure_logging("INFO", "text", sidecar=tmp_path)
        root = configure_logging("INFO", "text", sidecar=tmp_path)
        assert len(root.handlers) == 2
