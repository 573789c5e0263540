"""Centralized settings for slowentropy."""

from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Centralized settings, overridable through SLOWENT_* environment variables."""

    # Environment
    env: Literal["development", "testing", "production"] = Field(default="development")

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING", description="Log level"
    )
    log_format: Literal["json", "text"] = Field(default="text", description="Log format")
    log_file: Optional[str] = Field(default=None, description="Log file")
    log_rotation: str = Field(default="1 day", description="Log rotation")
    log_retention: str = Field(default="7 days", description="Log retention")

    # Spectral analysis
    spectral_tol: float = Field(
        default=1e-9, gt=0, lt=1, description="Cluster radius for imaginary eigenvalues"
    )

    # Monte Carlo Bowen volumes
    mc_epsilon: float = Field(default=0.1, gt=0, description="Bowen ball radius")
    mc_tmin: float = Field(default=10.0, ge=1, description="Smallest horizon T")
    mc_tratio: float = Field(default=2.0, gt=1, description="Geometric ratio of the T grid")
    mc_tcount: int = Field(default=5, ge=3, description="Number of horizons")
    mc_samples: int = Field(default=100_000, ge=1000, description="Samples per horizon")
    mc_chunk_size: int = Field(default=8192, ge=64, description="Samples per RNG stream")
    sup_mode: Literal["roots", "grid"] = Field(
        default="roots", description="Polynomial sup evaluation mode"
    )
    grid_points: int = Field(default=512, ge=16, description="Chebyshev points in grid mode")
    threads: int = Field(default=1, ge=1, le=256, description="Worker threads")

    # Torus coding
    torus_q: int = Field(default=10, ge=2, description="Cells per axis")
    torus_epsilon: float = Field(default=0.1, gt=0, lt=1, description="Hamming radius")
    torus_samples: int = Field(default=10_000, ge=10, description="Orbit samples")

    model_config = SettingsConfigDict(
        env_prefix="SLOWENT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        validate_assignment=True,
        extra="ignore",
    )

    @field_validator("log_file")
    @classmethod
    def validate_log_file(cls, v: Optional[str]) -> Optional[str]:
        """Create the log directory when needed."""
        if v:
            Path(v).parent.mkdir(parents=True, exist_ok=True)
        return v

    @property
    def is_development(self) -> bool:
        """True in the development environment."""
        return self.env == "development"

    @property
    def is_production(self) -> bool:
        """True in the production environment."""
        return self.env == "production"


@lru_cache()
def get_settings() -> Settings:
    """Return the cached settings instance."""
    return Settings()


def reload_settings() -> Settings:
    """Reload settings (useful in tests)."""
    get_settings.cache_clear()
    return get_settings()
