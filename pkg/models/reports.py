"""Output models: entropy reports, fits and simulation summaries."""

import math
from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from .configs import CodingConfig
from .structures import CentralizerSpectrum, ChainStructure, MatrixModel, RationalStr


class EntropyMethod(str, Enum):
    """How a slow-entropy exponent was obtained."""

    CHAIN_BASIS = "chain-basis"
    SL2_TRIPLE = "sl2-triple"
    CLOSED_FORM = "closed-form"


class FormulaKind(str, Enum):
    """Closed-form families."""

    BLOCK_SEQUENCE = "block-sequence"
    NILPOTENT = "nilpotent"
    TWISTED = "twisted"


class EntropyReport(BaseModel):
    """Slow-entropy exponent R of a flow, with how it was derived."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"R": "12", "method": "chain-basis", "structure": {"depths": [2, 2, 1, 1]}}},
    )

    R: RationalStr = Field(..., description="Polynomial slow-entropy exponent")
    method: EntropyMethod = Field(..., description="Derivation route")
    name: str | None = Field(default=None, description="Algebra label")
    structure: ChainStructure | None = Field(default=None, description="Chain structure of ad_U")
    spectrum: CentralizerSpectrum | None = Field(default=None, description="ad_X spectrum on C(U')")
    formula: FormulaKind | None = Field(default=None, description="Closed-form family")
    quasi_unipotence: Literal["exact", "numeric"] | None = Field(
        default=None, description="Path that certified quasi-unipotence"
    )
    lam: float | None = Field(default=None, description="Sequence growth ratio")
    sequence_entropy: float | None = Field(default=None, description="R * log(lambda)")


class TripleReport(BaseModel):
    """An sl(2)-triple with the spectrum of ad_X on C(U')."""

    model_config = ConfigDict(frozen=True)

    v: MatrixModel
    x: MatrixModel
    u_prime: MatrixModel
    spectrum: CentralizerSpectrum
    R: RationalStr


class SlopeFit(BaseModel):
    """Least-squares line through (log x, log y) points."""

    model_config = ConfigDict(frozen=True)

    exponent: float = Field(..., description="Fitted slope")
    intercept: float = Field(..., description="Fitted intercept")
    rms_residual: float = Field(..., ge=0, description="Root mean square residual")
    points: list[tuple[float, float]] = Field(..., description="Points used by the fit")


class VolumeRow(BaseModel):
    """One grid point of a volume series."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(..., description="Horizon T, or exponent N for sequence runs")
    volume: float = Field(..., gt=0)
    accepted: int = Field(..., ge=1)
    samples: int = Field(..., ge=1)

    @property
    def log10_t(self) -> float:
        return math.log10(self.t)

    @property
    def log10_volume(self) -> float:
        return math.log10(self.volume)


class BowenVolumeReport(BaseModel):
    """Bowen-ball volumes over a time grid and their log-log fit."""

    model_config = ConfigDict(frozen=True)

    structure: ChainStructure
    epsilon: float
    seed: int
    rows: list[VolumeRow]
    fit: SlopeFit
    predicted_exponent: float = Field(..., description="-R")
    dimension_exponent: int = Field(..., description="Exponent of epsilon")


class SequenceVolumeReport(BaseModel):
    """Sequence-Bowen volumes against N and their semi-log fit."""

    model_config = ConfigDict(frozen=True)

    structure: ChainStructure
    epsilon: float
    lam: float
    seed: int
    rows: list[VolumeRow]
    fit: SlopeFit
    fit_start: int = Field(..., description="Smallest N entering the fit")
    predicted_exponent: float = Field(..., description="-R * log(lambda)")


class NormEquivalence(BaseModel):
    """Empirical and certified constants between coefficient and sup norms."""

    model_config = ConfigDict(frozen=True)

    degree: int = Field(..., ge=0)
    trials: int = Field(..., ge=1)
    coefficient_over_sup: float = Field(..., description="max |coef|_inf / sup_[0,1] |p| observed")
    certified_bound: float = Field(..., description="Lagrange-interpolation upper bound")
    sup_over_coefficient: float = Field(..., description="max sup_[0,1] |p| / |coef|_inf observed")


class ShearingSummary(BaseModel):
    """Visit fractions of near-zero displacements before separation."""

    model_config = ConfigDict(frozen=True)

    structure: ChainStructure
    trials: int
    c: float
    eta: float
    degree: int = Field(..., description="Degree of |X_t|^2")
    max_fraction: float
    mean_fraction: float
    remez_bound: float = Field(..., description="4 * c^(2/degree)")
    seed: int


class BrudnyiSummary(BaseModel):
    """Random checks of the polynomial Remez-type inequality."""

    model_config = ConfigDict(frozen=True)

    trials: int
    max_degree: int
    violations: int
    worst_ratio: float = Field(..., description="Largest lhs / rhs seen")
    seed: int


class SpanningEstimate(BaseModel):
    """Covering counts for one code length n."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    greedy: int = Field(..., ge=1, description="Greedy epsilon-cover size (upper estimate)")
    separated: int = Field(..., ge=1, description="2*epsilon-separated subset size (lower estimate)")
    covered: float = Field(..., ge=0, le=1, description="Fraction of samples covered")


class TorusReport(BaseModel):
    """Spanning counts over a grid of code lengths and their log-log fit."""

    model_config = ConfigDict(frozen=True)

    coding: CodingConfig
    estimates: list[SpanningEstimate]
    fit: SlopeFit
    predicted_exponent: float = Field(..., description="d(d-1)/2")
