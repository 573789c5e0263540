"""Shared value types: rationals, matrices, chain structures, block data."""

from collections import Counter
from fractions import Fraction
from typing import Annotated, Any, Literal

from pydantic import AfterValidator, AliasChoices, BaseModel, ConfigDict, Field, field_validator, model_validator


def _canonical_rational(value: str) -> str:
    try:
        q = Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc
    return str(q)


RationalStr = Annotated[str, AfterValidator(_canonical_rational)]
"""A rational serialized as "p/q" (q omitted when 1), always reduced."""


def to_rational_str(value: Fraction | int) -> str:
    return str(Fraction(value))


class MatrixModel(BaseModel):
    """JSON form of an exact rational matrix."""

    model_config = ConfigDict(frozen=True)

    rows: int = Field(..., ge=0, description="Number of rows")
    cols: int = Field(..., ge=0, description="Number of columns")
    entries: list[list[RationalStr]] = Field(..., description="Row-major entries as p/q strings")

    @model_validator(mode="after")
    def check_shape(self) -> "MatrixModel":
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match declared shape {self.rows}x{self.cols}")
        return self


class ChainStructure(BaseModel):
    """Chain depths of ad_U, doubles listed twice, plus rotation speeds.

    ``double_depths[i]`` and ``alphas[i]`` describe the i-th double chain;
    each double depth is also counted twice in ``depths``.
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"depths": [2, 1, 1, 0], "alphas": [], "double_depths": []}},
    )

    depths: tuple[int, ...] = Field(..., description="Chain depths sorted descending")
    alphas: tuple[float, ...] = Field(default=(), description="Rotation speed of each double chain")
    double_depths: tuple[int, ...] = Field(default=(), description="Depth of each double chain")

    @model_validator(mode="before")
    @classmethod
    def canonical_order(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        if "depths" in data:
            data["depths"] = tuple(sorted((int(m) for m in data["depths"]), reverse=True))
        alphas = tuple(data.get("alphas", ()))
        doubles = tuple(data.get("double_depths", ()))
        if len(alphas) != len(doubles):
            raise ValueError("alphas and double_depths must have the same length")
        pairs = sorted(zip((int(m) for m in doubles), (float(a) for a in alphas)), key=lambda p: (-p[0], p[1]))
        data["double_depths"] = tuple(p[0] for p in pairs)
        data["alphas"] = tuple(p[1] for p in pairs)
        return data

    @field_validator("depths", "double_depths")
    @classmethod
    def non_negative(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(m < 0 for m in v):
            raise ValueError("chain depths must be non-negative")
        return v

    @field_validator("alphas")
    @classmethod
    def positive_speeds(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(not a > 0 for a in v):
            raise ValueError("rotation speeds must be positive")
        return v

    @model_validator(mode="after")
    def doubles_counted_twice(self) -> "ChainStructure":
        available = Counter(self.depths)
        for m in self.double_depths:
            available[m] -= 2
            if available[m] < 0:
                raise ValueError(f"double chain of depth {m} must appear twice in depths")
        return self

    @property
    def chain_depths(self) -> tuple[int, ...]:
        """Depths of the single (non-rotating) chains."""
        remaining = Counter(self.depths)
        for m in self.double_depths:
            remaining[m] -= 2
        return tuple(sorted(remaining.elements(), reverse=True))

    @property
    def doubles(self) -> tuple[tuple[int, float], ...]:
        return tuple(zip(self.double_depths, self.alphas))

    @property
    def dimension(self) -> int:
        return sum(m + 1 for m in self.depths)


class BlockSequence(BaseModel):
    """Nondecreasing block sizes k_1 <= ... <= k_n of a nilpotent in sl(d)."""

    model_config = ConfigDict(frozen=True, json_schema_extra={"example": {"k": [1, 2]}})

    k: tuple[int, ...] = Field(..., min_length=1, description="Block sizes, nondecreasing")

    @field_validator("k")
    @classmethod
    def sorted_positive(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(x < 1 for x in v):
            raise ValueError("block sizes must be positive")
        if any(a > b for a, b in zip(v, v[1:])):
            raise ValueError("block sequence must be nondecreasing")
        return v

    @property
    def dimension(self) -> int:
        return sum(self.k)


class JordanLengths(BaseModel):
    """Jordan block lengths of a nilpotent acting on a representation space."""

    model_config = ConfigDict(frozen=True)

    lengths: tuple[int, ...] = Field(..., description="Jordan block lengths")

    @field_validator("lengths")
    @classmethod
    def positive(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(x < 1 for x in v):
            raise ValueError("Jordan block lengths must be positive")
        return v


class SymPowerSpec(BaseModel):
    """Symmetric power of the standard representation."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["sym"] = Field(default="sym", description="Representation family")
    n: int = Field(..., ge=0, le=12, description="Symmetric power")


class CentralizerSpectrum(BaseModel):
    """Multiplicities d_n of the eigenvalues n of ad_X on C(U')."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    multiplicities: dict[int, int] = Field(
        ...,
        validation_alias=AliasChoices("d_n", "multiplicities"),
        serialization_alias="d_n",
        description="eigenvalue -> multiplicity",
    )

    @field_validator("multiplicities")
    @classmethod
    def non_negative_spectrum(cls, v: dict[int, int]) -> dict[int, int]:
        if any(n < 0 or d < 0 for n, d in v.items()):
            raise ValueError("eigenvalues and multiplicities must be non-negative")
        return {n: d for n, d in sorted(v.items()) if d}

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities.values())


class AlgebraSpec(BaseModel):
    """A matrix Lie algebra given by a basis, with a chosen flow generator."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(default="algebra", description="Label for reports")
    basis: list[MatrixModel] = Field(..., min_length=1, description="Basis of the algebra")
    u: MatrixModel | None = Field(default=None, description="Generator of the flow")

    @model_validator(mode="after")
    def same_shape(self) -> "AlgebraSpec":
        shapes = {(b.rows, b.cols) for b in self.basis}
        if self.u is not None:
            shapes.add((self.u.rows, self.u.cols))
        if len(shapes) != 1:
            raise ValueError("basis elements and u must share one square shape")
        rows, cols = shapes.pop()
        if rows != cols:
            raise ValueError("algebra elements must be square matrices")
        return self
