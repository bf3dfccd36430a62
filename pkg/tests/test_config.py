"""
Configuration Tests

Tests for environment-driven settings.
"""

import pytest
from pydantic import ValidationError


class TestSettings:
    """Tests for Settings configuration."""

    def test_settings_loads_defaults(self):
        """Settings should load with defaults."""
        from vdec.config import Settings
        settings = Settings()
        assert settings.app_version == "0.1.0"
        assert settings.exact_limit == 20
        assert settings.oracle_slack == 3
        assert settings.log_level == "WARNING"

    def test_settings_loads_from_env(self, monkeypatch):
        """Settings should load from VDEC_ environment variables."""
        monkeypatch.setenv("VDEC_SEED", "42")
        monkeypatch.setenv("VDEC_FOREST_RESTARTS", "7")

        from vdec.config import Settings
        settings = Settings()
        assert settings.seed == 42
        assert settings.forest_restarts == 7

    def test_env_names_are_case_insensitive(self, monkeypatch):
        """Lower-case variable names should be accepted."""
        monkeypatch.setenv("vdec_uphill_limit", "9")

        from vdec.config import Settings
        assert Settings().uphill_limit == 9

    def test_budgets_must_be_positive(self, monkeypatch):
        """A zero budget should fail at load time."""
        monkeypatch.setenv("VDEC_SEMI_VD_RESTARTS", "0")

        from vdec.config import Settings
        with pytest.raises(ValidationError):
            Settings()

    def test_unknown_log_level_rejected(self, monkeypatch):
        """Only the four supported log levels are valid."""
        monkeypatch.setenv("VDEC_LOG_LEVEL", "CHATTY")

        from vdec.config import Settings
        with pytest.raises(ValidationError):
            Settings()

    def test_get_settings_cached(self):
        """get_settings should return cached instance."""
        from vdec.config import get_settings

        settings1 = get_settings()
        settings2 = get_settings()
        assert settings1 is settings2
