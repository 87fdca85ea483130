"""Configuration management using Pydantic Settings."""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from pydantic import Field  # type: ignore[import-untyped]
from pydantic_settings import BaseSettings, SettingsConfigDict  # type: ignore[import-untyped]

from ishida_cohomology.paths import fan_output_dir, fuzz_failures_dir


class IshidaSettings(BaseSettings):
    """Runtime configuration, read from ISHIDA_* environment variables or .env."""

    model_config = SettingsConfigDict(env_prefix="ISHIDA_", env_file=".env", extra="ignore")

    threads: int = Field(default=0, ge=0, description="Worker threads across p values (0 = serial)")
    log_level: str = Field(default="WARNING", description="Log level of the CLI stderr sink")
    fuzz_entry_bound: int = Field(default=3, ge=1, description="Bound on |entries| of random fuzz rays")
    fuzz_failures_dir: Path = Field(default_factory=fuzz_failures_dir, description="Reproducer fan files")
    fan_output_dir: Path = Field(default_factory=fan_output_dir, description="Multi-file builder output")


@lru_cache(maxsize=1)
def get_settings() -> IshidaSettings:
    """Get cached settings."""
    return IshidaSettings()
