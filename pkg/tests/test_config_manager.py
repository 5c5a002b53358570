"""
Tests for configuration management.
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from src.config_manager import HomTwistSettings, RepCategoryConfig, default_alpha_window, get_settings


class TestConfigManager:
    """Test configuration management functionality."""

    def test_default_settings(self):
        """Test default settings creation."""
        settings = HomTwistSettings()

        assert settings.algebra.alpha_window == 8
        assert settings.rep_category.grid_min == -2
        assert settings.rep_category.grid_max == 2
        assert settings.rep_category.module_set == ["trivial", "regular", "random"]
        assert settings.rep_category.tuple_strategy == "cyclic"
        assert settings.rep_category.functor_shift == 3
        assert settings.reports.include_timing is True

    def test_config_from_file(self, temp_config_file):
        """Test loading configuration from file."""
        settings = HomTwistSettings.from_file(temp_config_file)

        assert settings.algebra.alpha_window == 6
        assert settings.rep_category.seed == 7
        assert settings.rep_category.module_set == ["trivial", "regular"]
        assert settings.reports.include_timing is False

    def test_missing_file_falls_back_to_defaults(self, tmp_path):
        """Test that a missing config file yields default settings."""
        settings = HomTwistSettings.from_file(tmp_path / "absent.json")
        assert settings.algebra.alpha_window == 8

    def test_environment_variables(self, monkeypatch):
        """Test configuration from environment variables."""
        monkeypatch.setenv("HOMTWIST_ALGEBRA__ALPHA_WINDOW", "10")
        monkeypatch.setenv("HOMTWIST_REP_CATEGORY__SEED", "42")
        get_settings.cache_clear()

        settings = get_settings()
        assert settings.algebra.alpha_window == 10
        assert settings.rep_category.seed == 42
        assert default_alpha_window() == 10

    def test_reports_directory_override(self, tmp_path):
        """Test that the isolated report directory is picked up."""
        assert Path(get_settings().reports.directory) == tmp_path / "reports"

    def test_get_settings_is_cached(self):
        """Test that settings are loaded once."""
        assert get_settings() is get_settings()


class TestRepCategoryConfig:
    """Test validation of the representation-category section."""

    def test_inverted_grid_rejected(self):
        """Test that grid_max below grid_min is rejected."""
        with pytest.raises(ValidationError):
            RepCategoryConfig(grid_min=2, grid_max=-2)

    def test_unknown_module_kind_rejected(self):
        """Test that only known module kinds are accepted."""
        with pytest.raises(ValidationError):
            RepCategoryConfig(module_set=["trivial", "adjoint"])

    def test_tuple_strategy_values(self):
        """Test the allowed tuple strategies."""
        assert RepCategoryConfig(tuple_strategy="all").tuple_strategy == "all"
        with pytest.raises(ValidationError):
            RepCategoryConfig(tuple_strategy="sampled")
