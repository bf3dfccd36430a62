"""
Application Configuration

Loads search budgets and defaults from VDEC_* environment variables.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment."""

    model_config = SettingsConfigDict(
        env_prefix="VDEC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Reproducibility
    seed: int = Field(default=0, ge=0, lt=2**64)

    # Search budgets
    exact_limit: int = Field(default=20, gt=0, description="Largest component solved exactly")
    semi_vd_restarts: int = Field(default=50, gt=0)
    forest_restarts: int = Field(default=200, gt=0)
    long_path_restarts: int = Field(default=20, gt=0)
    uphill_limit: int = Field(default=4, gt=0)

    # Exact oracle
    oracle_slack: int = Field(default=3, gt=0, description="k_max = k(G) + slack")
    oracle_edge_limit: int = Field(default=12, gt=0)

    # Bench
    bench_jobs: int = Field(default=1, gt=0)

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"

    # App info
    app_name: str = "vdec - vertex-distinguishing edge coloring"
    app_version: str = "0.1.0"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
