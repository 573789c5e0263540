"""Tests for configuration module."""

import pytest
from pydantic import ValidationError

from config.logging import get_logger, log_error, setup_logging
from config.settings import Settings, get_settings, reload_settings
from models import McConfig


class TestSettings:
    """Test Settings class."""

    def test_default_settings(self, test_env_vars):
        """Environment variables override defaults."""
        settings = reload_settings()

        assert settings.env == "testing"
        assert settings.log_level == "DEBUG"
        assert settings.mc_samples == 20000
        assert settings.threads == 2
        assert settings.spectral_tol == pytest.approx(1e-9)
        assert settings.sup_mode == "roots"

    def test_environment_detection(self, test_env_vars, monkeypatch):
        """Test environment detection methods."""
        settings = reload_settings()

        assert settings.is_development is False  # testing env
        assert settings.is_production is False

        monkeypatch.setenv("SLOWENT_ENV", "production")
        settings = reload_settings()
        assert settings.is_production is True
        assert settings.is_development is False

        monkeypatch.setenv("SLOWENT_ENV", "development")
        settings = reload_settings()
        assert settings.is_development is True
        assert settings.is_production is False

    def test_validation_errors(self, test_env_vars, monkeypatch):
        """Out-of-range values are rejected."""
        monkeypatch.setenv("SLOWENT_MC_CHUNK_SIZE", "8")
        with pytest.raises(ValidationError):
            Settings()

    def test_sup_mode_literal(self, test_env_vars, monkeypatch):
        monkeypatch.setenv("SLOWENT_SUP_MODE", "exact")
        with pytest.raises(ValidationError):
            Settings()

    def test_assignment_is_validated(self, test_settings):
        with pytest.raises(ValidationError):
            test_settings.log_level = "LOUD"

    def test_log_file_directory_creation(self, test_env_vars, temp_dir, monkeypatch):
        """Test log file directory creation."""
        log_path = temp_dir / "logs" / "nested" / "run.log"

        monkeypatch.setenv("SLOWENT_LOG_FILE", str(log_path))
        settings = reload_settings()

        assert log_path.parent.exists()
        assert settings.log_file == str(log_path)


class TestSettingsCaching:
    """Test settings caching mechanism."""

    def test_settings_cached(self, test_env_vars):
        """Test that settings are cached."""
        settings1 = get_settings()
        settings2 = get_settings()

        assert settings1 is settings2

    def test_settings_reload_clears_cache(self, test_env_vars, monkeypatch):
        """Test that reload_settings clears cache."""
        reload_settings()

        monkeypatch.setenv("SLOWENT_THREADS", "3")

        settings2 = get_settings()
        assert settings2.threads == 2  # Still cached

        settings3 = reload_settings()
        assert settings3.threads == 3

        settings4 = get_settings()
        assert settings4.threads == 3

    def test_mc_config_from_settings(self, test_settings):
        cfg = McConfig.from_settings(seed=7, tcount=None, epsilon=0.2)
        assert cfg.samples == 20000
        assert cfg.threads == 2
        assert cfg.epsilon == pytest.approx(0.2)
        assert cfg.tcount == test_settings.mc_tcount
        assert cfg.seed == 7


class TestLogging:
    """Loguru sinks follow the settings."""

    def test_log_file_receives_records(self, test_settings, temp_dir):
        setup_logging()
        get_logger("tests").warning("Config check", marker="abc")
        log_error(ValueError("boom"), {"where": "test"})
        from loguru import logger

        logger.complete()
        content = (temp_dir / "test.log").read_text(encoding="utf-8")
        assert "Config check" in content
        assert "boom" in content
