"""Configuration management for hom-twist using Pydantic."""

import json
import os
from functools import lru_cache
from pathlib import Path
from typing import List, Literal

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings

# --- Pydantic Models for nested configuration in config.json ---


class AlgebraConfig(BaseModel):
    """Maps to the 'algebra' object in config.json."""
    alpha_window: int = Field(default=8, ge=1, le=64, description="α-powers are cached for -w..w")
    dense_threshold: int = Field(default=8, ge=0, description="Products below this dimension use dense object arrays")


class RepCategoryConfig(BaseModel):
    """Maps to the 'rep_category' object in config.json."""
    grid_min: int = -2
    grid_max: int = 2
    seed: int = 0
    module_set: List[str] = Field(default_factory=lambda: ["trivial", "regular", "random"])
    max_workers: int = Field(default=4, ge=1)
    random_module_entry_bound: int = Field(default=3, ge=1)
    probe_shifts: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    tuple_strategy: Literal["cyclic", "all"] = Field(
        default="cyclic", description="cyclic: diagonal plus rotations of the module list; all: every tuple"
    )
    functor_shift: int = Field(default=3, description="Source shift s of Rep^{i+s,j+s}(H) -> Rep^{i,j}(H^σ)")

    @field_validator("grid_max")
    @classmethod
    def validate_grid(cls, v, info):
        if info.data.get("grid_min") is not None and v < info.data["grid_min"]:
            raise ValueError("grid_max cannot be smaller than grid_min")
        return v

    @field_validator("module_set")
    @classmethod
    def validate_module_set(cls, v):
        allowed = {"trivial", "regular", "random"}
        unknown = [name for name in v if name not in allowed]
        if unknown:
            raise ValueError(f"Unknown module kinds: {unknown}")
        return v


class ReportConfig(BaseModel):
    """Maps to the 'reports' object in config.json."""
    directory: Path = Path("./reports")
    include_timing: bool = True


class LoggingConfig(BaseModel):
    """Maps to the 'logging' object in config.json."""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file: str = "logs/hom_twist.log"
    max_size_mb: int = 10
    backup_count: int = 5


class HomTwistSettings(BaseSettings):
    """Main settings class that loads from JSON and overrides with environment variables."""
    algebra: AlgebraConfig = Field(default_factory=AlgebraConfig)
    rep_category: RepCategoryConfig = Field(default_factory=RepCategoryConfig)
    reports: ReportConfig = Field(default_factory=ReportConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    model_config = {
        "env_prefix": "HOMTWIST_",
        "env_nested_delimiter": "__",
        "env_file": ".env",
        "extra": "ignore",
    }

    @classmethod
    def settings_customise_sources(
        cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings
    ):
        # Environment beats values read from config.json
        return env_settings, dotenv_settings, init_settings, file_secret_settings

    @classmethod
    def from_file(cls, config_path: Path) -> "HomTwistSettings":
        """Load settings from a JSON file."""
        try:
            with open(config_path, "r") as f:
                config_data = json.load(f)
            return cls.model_validate(config_data)
        except (FileNotFoundError, json.JSONDecodeError):
            # Return default settings if file doesn't exist or is invalid
            return cls()


# --- Public Accessor Function ---

@lru_cache()
def get_settings() -> HomTwistSettings:
    """Loads settings and caches the result.

    config/config.json is read when present; HOMTWIST_* environment variables
    override file values (e.g. HOMTWIST_ALGEBRA__ALPHA_WINDOW=10).
    """
    try:
        if os.path.exists("config/config.json"):
            with open("config/config.json", "r") as f:
                config_data = json.load(f)
            settings = HomTwistSettings(**config_data)
        else:
            settings = HomTwistSettings()
    except Exception:
        # Fallback to default settings if config loading fails
        settings = HomTwistSettings()

    return settings


def default_alpha_window() -> int:
    return get_settings().algebra.alpha_window
