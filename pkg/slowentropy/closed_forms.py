"""Closed-form slow-entropy exponents for the worked families."""

from collections.abc import Sequence
from fractions import Fraction

from models import BlockSequence, CentralizerSpectrum, JordanLengths

from ._errors import BlockSequenceError, InvalidParameterError


def _as_blocks(k: BlockSequence | Sequence[int]) -> tuple[int, ...]:
    if isinstance(k, BlockSequence):
        return k.k
    values = tuple(int(x) for x in k)
    if not values or any(x < 1 for x in values):
        raise BlockSequenceError("block sizes must be positive and non-empty")
    if any(a > b for a, b in zip(values, values[1:])):
        raise BlockSequenceError(f"block sequence must be nondecreasing, got {list(values)}")
    return values


def r_single_block(d: int) -> Fraction:
    """R of a single principal block of size d: d(d-1)(4d+1)/6."""
    if d < 1:
        raise InvalidParameterError(f"block size must be positive, got {d}")
    return Fraction(d * (d - 1) * (4 * d + 1), 6)


def r_block_sequence(k: BlockSequence | Sequence[int]) -> Fraction:
    """R of a block-diagonal nilpotent in sl(d) with nondecreasing blocks k.

    Diagonal blocks contribute k(4k+1)(k-1)/6 each; every pair i < j
    contributes k_i(k_i^2 + 3k_j^2 - 3k_j - 1)/3.
    """
    blocks = _as_blocks(k)
    total = sum((r_single_block(b) for b in blocks), Fraction(0))
    for j, kj in enumerate(blocks):
        for ki in blocks[:j]:
            total += Fraction(ki * (ki * ki + 3 * kj * kj - 3 * kj - 1), 3)
    return total


def r_nilpotent_example(d: int) -> Fraction:
    """R = d(d-1)/2 for the (d+1)-dimensional skew-shift algebra."""
    if d < 1:
        raise InvalidParameterError(f"dimension must be positive, got {d}")
    return Fraction(d * (d - 1), 2)


def r_twisted(k: BlockSequence | Sequence[int], lengths: JordanLengths | Sequence[int]) -> Fraction:
    """Semisimple part plus sum of l(l-1)/2 over the Jordan lengths of drho(U)."""
    ls = lengths.lengths if isinstance(lengths, JordanLengths) else tuple(int(x) for x in lengths)
    if any(x < 1 for x in ls):
        raise BlockSequenceError("Jordan lengths must be positive")
    return r_block_sequence(k) + sum((Fraction(x * (x - 1), 2) for x in ls), Fraction(0))


def r_sl2_spectrum(spectrum: CentralizerSpectrum) -> Fraction:
    """sum over eigenvalues n of d_n n(n+1)/2."""
    return sum((Fraction(d * n * (n + 1), 2) for n, d in spectrum.multiplicities.items()), Fraction(0))
