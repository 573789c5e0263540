"""Input models for the empirical estimators."""

import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import get_settings

SupMode = Literal["roots", "grid"]


class McConfig(BaseModel):
    """Monte Carlo Bowen-ball volume run."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"epsilon": 0.1, "tmin": 10, "tratio": 2, "tcount": 5, "samples": 100000, "seed": 1}
        },
    )

    epsilon: float = Field(default=0.1, gt=0, description="Bowen radius")
    tmin: float = Field(default=10.0, ge=1, description="Smallest time of the grid")
    tratio: float = Field(default=2.0, gt=1, description="Ratio of the geometric time grid")
    tcount: int = Field(default=5, ge=3, description="Number of grid times")
    samples: int = Field(default=100_000, ge=1000, description="Samples per grid time")
    seed: int = Field(..., ge=0, lt=2**64, description="Root seed of the sample streams")
    sup_mode: SupMode = Field(default="roots", description="How polynomial suprema are computed")
    grid_points: int = Field(default=512, ge=16, description="Chebyshev points in grid mode")
    chunk_size: int = Field(default=8192, ge=64, description="Samples per RNG stream")
    threads: int = Field(default=1, ge=1, description="Worker threads")

    @property
    def t_grid(self) -> tuple[float, ...]:
        return tuple(self.tmin * self.tratio**i for i in range(self.tcount))

    @classmethod
    def from_settings(cls, **overrides: Any) -> "McConfig":
        """Build a config from the process settings, overridden by non-None kwargs."""
        s = get_settings()
        values: dict[str, Any] = {
            "epsilon": s.mc_epsilon,
            "tmin": s.mc_tmin,
            "tratio": s.mc_tratio,
            "tcount": s.mc_tcount,
            "samples": s.mc_samples,
            "sup_mode": s.sup_mode,
            "grid_points": s.grid_points,
            "chunk_size": s.mc_chunk_size,
            "threads": s.threads,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class SequenceConfig(BaseModel):
    """Sequence-Bowen volume run along the times L * lambda^k."""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(default=0.1, gt=0)
    base_time: float = Field(default=1.0, gt=0, description="L in the time sequence L * lambda^k")
    lam: float = Field(default=2.0, gt=1, description="Growth ratio lambda")
    n_max: int = Field(default=10, ge=3, description="Largest exponent N")
    samples: int = Field(default=100_000, ge=1000)
    seed: int = Field(..., ge=0, lt=2**64)
    chunk_size: int = Field(default=8192, ge=64)
    threads: int = Field(default=1, ge=1)

    def times(self, n: int) -> tuple[float, ...]:
        return tuple(self.base_time * self.lam**k for k in range(n + 1))


class CodingConfig(BaseModel):
    """Hamming-ball covering of the skew-shift on the d-torus."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"d": 2, "q": 10, "n": 100, "epsilon": 0.1, "samples": 10000, "seed": 7}},
    )

    d: int = Field(..., ge=1, le=8, description="Torus dimension")
    alpha: float = Field(default=math.sqrt(2) - 1, ge=0, lt=1, description="Rotation number")
    q: int = Field(default=10, ge=2, description="Cells per side of the partition")
    n: int = Field(default=100, ge=1, description="Code length")
    epsilon: float = Field(default=0.1, gt=0, lt=1, description="Hamming radius")
    samples: int = Field(default=10_000, ge=1, description="Sampled starting points")
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def cells_fit_index(self) -> "CodingConfig":
        if self.q**self.d >= 2**62:
            raise ValueError("q**d cells do not fit in a 64-bit cell index")
        return self
