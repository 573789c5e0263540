"""Polynomial slow entropy of quasi-unipotent flows on homogeneous spaces."""

from loguru import logger

__version__ = "0.1.0"

from ._errors import (  # noqa: E402
    NotQuasiUnipotentError,
    SlopeAssertionError,
    SlowEntropyError,
)
from .chains import analyze, chain_basis, chain_structure, is_quasi_unipotent, sequence_entropy, slow_entropy  # noqa: E402
from .closed_forms import r_block_sequence, r_nilpotent_example, r_sl2_spectrum, r_twisted  # noqa: E402
from .exact_linalg import RatMatrix, ad_operator  # noqa: E402
from .sl2 import Sl2Triple, block_triple, entropy_via_triple, jacobson_morozov  # noqa: E402

# Library use stays quiet until the CLI (or the caller) enables the namespace.
logger.disable("slowentropy")

__all__ = [
    "__version__",
    "RatMatrix",
    "ad_operator",
    "analyze",
    "chain_basis",
    "chain_structure",
    "is_quasi_unipotent",
    "slow_entropy",
    "sequence_entropy",
    "r_block_sequence",
    "r_nilpotent_example",
    "r_sl2_spectrum",
    "r_twisted",
    "Sl2Triple",
    "block_triple",
    "entropy_via_triple",
    "jacobson_morozov",
    "SlowEntropyError",
    "NotQuasiUnipotentError",
    "SlopeAssertionError",
]
