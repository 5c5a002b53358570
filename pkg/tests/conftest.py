"""
Pytest configuration and shared fixtures.
"""

import json
from pathlib import Path

import pytest

from src.config_manager import get_settings
from src.examples_library import get_instance, group_algebra, sweedler_algebra
from src.rep_category import random_module, regular_module, trivial_module


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep reports and log files of every test inside its own temporary directory."""
    monkeypatch.setenv("HOMTWIST_REPORTS__DIRECTORY", str(tmp_path / "reports"))
    monkeypatch.setenv("HOMTWIST_LOGGING__FILE", "")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def temp_config_file(tmp_path):
    """Create a temporary config file for testing."""
    config_data = {
        "algebra": {"alpha_window": 6},
        "rep_category": {
            "grid_min": -1,
            "grid_max": 1,
            "seed": 7,
            "module_set": ["trivial", "regular"],
        },
        "reports": {"directory": str(tmp_path / "out"), "include_timing": False},
    }
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps(config_data))
    return config_file


@pytest.fixture(scope="session")
def z2():
    """ℚ[ℤ/2] with α = id, carrying the bicharacter twist and R-matrix sigma_beta."""
    return get_instance("z2")


@pytest.fixture(scope="session")
def z4():
    """ℚ[ℤ/4] with α(g) = g³."""
    return get_instance("z4_m3")


@pytest.fixture(scope="session")
def sweedler_m1():
    """Sweedler's H4 with α scaling x by -1; carries R0, R_x and the x-supported twist."""
    return get_instance("sweedler_m1")


@pytest.fixture(scope="session")
def sweedler_2():
    """Sweedler's H4 with α scaling x by 2; only grouplike named elements."""
    return get_instance("sweedler_2")


@pytest.fixture(scope="session")
def ordinary_group():
    return group_algebra(3)


@pytest.fixture(scope="session")
def ordinary_sweedler():
    return sweedler_algebra()


@pytest.fixture(scope="session")
def z2_modules(z2):
    """Trivial, regular and seeded random modules over ℚ[ℤ/2]."""
    H = z2.data
    return [trivial_module(H), regular_module(H), random_module(H, seed=0)]


@pytest.fixture(scope="session")
def sweedler_modules(sweedler_m1):
    H = sweedler_m1.data
    return [trivial_module(H), regular_module(H)]


@pytest.fixture
def report_path(tmp_path) -> Path:
    return tmp_path / "report.json"
