"""Models package for slowentropy inputs and reports."""

from .configs import CodingConfig, McConfig, SequenceConfig, SupMode
from .reports import (
    BowenVolumeReport,
    BrudnyiSummary,
    EntropyMethod,
    EntropyReport,
    FormulaKind,
    NormEquivalence,
    SequenceVolumeReport,
    ShearingSummary,
    SlopeFit,
    SpanningEstimate,
    TorusReport,
    TripleReport,
    VolumeRow,
)
from .structures import (
    AlgebraSpec,
    BlockSequence,
    CentralizerSpectrum,
    ChainStructure,
    JordanLengths,
    MatrixModel,
    RationalStr,
    SymPowerSpec,
    to_rational_str,
)

__all__ = [
    # Value types
    "AlgebraSpec",
    "BlockSequence",
    "CentralizerSpectrum",
    "ChainStructure",
    "JordanLengths",
    "MatrixModel",
    "RationalStr",
    "SymPowerSpec",
    "to_rational_str",
    # Inputs
    "CodingConfig",
    "McConfig",
    "SequenceConfig",
    "SupMode",
    # Reports
    "BowenVolumeReport",
    "BrudnyiSummary",
    "EntropyMethod",
    "EntropyReport",
    "FormulaKind",
    "NormEquivalence",
    "SequenceVolumeReport",
    "ShearingSummary",
    "SlopeFit",
    "SpanningEstimate",
    "TorusReport",
    "TripleReport",
    "VolumeRow",
]
