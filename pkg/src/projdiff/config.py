"""Configuration management for the laboratory.

This module provides centralized configuration using Pydantic settings with
environment variable support (prefix ``PROJDIFF_``), validation, and the
per-run ``RunConfig`` that every computation receives explicitly.
"""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exact.sampling import RationalSampler

SEED_LIMIT = 2**64


class Settings(BaseSettings):
    """Laboratory settings with environment variable support and validation."""

    model_config = SettingsConfigDict(
        env_prefix="PROJDIFF_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Sampling Configuration
    seed: int = Field(default=20240601, description="Seed of the random stream")
    retries: int = Field(
        default=3, description="Re-draws of random points before giving up"
    )
    height: int = Field(
        default=50, description="Numerators of random rationals lie in [-H, H]"
    )

    # Trial Counts
    quadric_rank_trials: int = Field(
        default=20, description="Random combinations tried for generic quadric rank"
    )
    generic_vector_samples: int = Field(
        default=20, description="Tangent vectors sampled when choosing II-generic v"
    )
    max_jet_order: int = Field(default=6, description="Largest allowed jet order")
    certify_trials: int = Field(
        default=64, description="Minimum trials for randomized rank certificates"
    )
    certify_log2_bound: int = Field(
        default=40, description="Certificates target failure probability 2^-bound"
    )
    symbolic_minor_budget: int = Field(
        default=100_000, description="Largest minor count accepted in symbolic mode"
    )
    split_type_retries: int = Field(
        default=20, description="Re-draws when building split-type spaces"
    )
    odd_rank_trials: int = Field(
        default=200, description="Random pencils tested by the odd-rank obstruction"
    )
    match_node_budget: int = Field(
        default=200_000, description="Search nodes for signed-permutation matching"
    )

    # Output Configuration
    output_format: Literal["json", "table"] = Field(
        default="json", description="Report format written to stdout"
    )
    debug: bool = Field(default=False, description="Enable debug mode")
    log_level: str = Field(
        default="WARNING",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is one of the allowed values."""
        allowed_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if v.upper() not in allowed_levels:
            raise ValueError(f"log_level must be one of {allowed_levels}")
        return v.upper()

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        """Validate the seed fits in 64 bits."""
        if not 0 <= v < SEED_LIMIT:
            raise ValueError("seed must lie in [0, 2**64)")
        return v

    @field_validator(
        "retries",
        "height",
        "quadric_rank_trials",
        "generic_vector_samples",
        "certify_trials",
        "certify_log2_bound",
        "symbolic_minor_budget",
        "split_type_retries",
        "odd_rank_trials",
        "match_node_budget",
    )
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Validate counts are positive."""
        if v <= 0:
            raise ValueError("counts must be positive integers")
        return v

    @field_validator("max_jet_order")
    @classmethod
    def validate_max_jet_order(cls, v: int) -> int:
        """Validate the jet order cap."""
        if not 2 <= v <= 8:
            raise ValueError("max_jet_order must lie in [2, 8]")
        return v


class RunConfig(BaseModel):
    """Immutable knobs of a single run.

    Two runs with equal ``RunConfig`` produce byte-identical reports: every
    random choice is drawn from ``sampler()``, which restarts the seeded
    stream.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0, lt=SEED_LIMIT)
    retries: int = Field(default=3, gt=0)
    height: int = Field(default=50, gt=0)
    quadric_rank_trials: int = Field(default=20, gt=0)
    generic_vector_samples: int = Field(default=20, gt=0)
    max_jet_order: int = Field(default=6, ge=2, le=8)
    certify_trials: int = Field(default=64, gt=0)
    certify_log2_bound: int = Field(default=40, gt=0)
    symbolic_minor_budget: int = Field(default=100_000, gt=0)
    split_type_retries: int = Field(default=20, gt=0)
    odd_rank_trials: int = Field(default=200, gt=0)
    match_node_budget: int = Field(default=200_000, gt=0)
    output_format: Literal["json", "table"] = "json"

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Any) -> "RunConfig":
        """Build a run configuration from settings plus non-``None`` overrides."""
        values = {name: getattr(settings, name) for name in cls.model_fields}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def sampler(self, stream: int = 0) -> RationalSampler:
        """Fresh sampler for this run; ``stream`` separates independent draws."""
        return RationalSampler.from_seed(self.seed, self.height, stream=stream)


class ConfigurationError(Exception):
    """Raised when configuration validation fails."""

    pass


def get_settings() -> Settings:
    """Get laboratory settings with error handling.

    Returns:
        Settings: Validated settings

    Raises:
        ConfigurationError: If configuration validation fails
    """
    try:
        return Settings()
    except Exception as e:
        raise ConfigurationError(f"Configuration validation failed: {str(e)}") from e
