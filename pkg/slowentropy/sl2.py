"""sl(2)-triples and the centralizer route to R.

A triple (V, X, U') satisfies [X, U'] = 2U', [X, V] = -2V, [U', V] = X.
The slow-entropy exponent of U' is read off the eigenvalues of ad_X on the
centralizer C(U'): each eigenvalue n with multiplicity d_n contributes
d_n n(n+1)/2.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from config import get_logger
from models import CentralizerSpectrum

from ._errors import InvalidParameterError, InvalidTripleError, NoRationalTripleError
from .closed_forms import r_sl2_spectrum
from .exact_linalg import (
    RatMatrix,
    Vector,
    ad_operator,
    bracket,
    char_poly,
    combine,
    coordinates,
    nilpotency_index,
)

logger = get_logger("slowentropy.sl2")


@dataclass(frozen=True)
class Sl2Triple:
    """(V, X, U') as matrices of the same size."""

    v: RatMatrix
    x: RatMatrix
    u_prime: RatMatrix

    @property
    def size(self) -> int:
        return self.x.rows


def verify_triple(triple: Sl2Triple) -> bool:
    """Exact check of the three bracket relations."""
    v, x, u = triple.v, triple.x, triple.u_prime
    return (
        bracket(x, u) == u.scale(2)
        and bracket(x, v) == v.scale(-2)
        and bracket(u, v) == x
    )


def principal_triple(d: int) -> Sl2Triple:
    """The principal triple of sl(d).

    X = diag(d-1, d-3, ..., 1-d), U' has ones on the superdiagonal and V has
    i(d-i) at position (i+1, i).
    """
    if d < 2:
        raise InvalidParameterError(f"principal triples need d >= 2, got {d}")
    return _principal(d)


def _principal(d: int) -> Sl2Triple:
    x = RatMatrix.diagonal([d - 1 - 2 * i for i in range(d)])
    u = RatMatrix.from_rows([[1 if j == i + 1 else 0 for j in range(d)] for i in range(d)])
    v = RatMatrix.from_rows([[(j + 1) * (d - j - 1) if i == j + 1 else 0 for j in range(d)] for i in range(d)])
    return Sl2Triple(v=v, x=x, u_prime=u)


def block_triple(blocks: Sequence[int]) -> Sl2Triple:
    """Block-diagonal sum of principal triples; blocks of size 1 contribute zeros."""
    if not blocks or any(k < 1 for k in blocks):
        raise InvalidParameterError("block sizes must be positive")
    parts = [_principal(k) for k in blocks]
    return Sl2Triple(
        v=RatMatrix.block_diag(*(p.v for p in parts)),
        x=RatMatrix.block_diag(*(p.x for p in parts)),
        u_prime=RatMatrix.block_diag(*(p.u_prime for p in parts)),
    )


def centralizer(basis: Sequence[RatMatrix], u: RatMatrix) -> list[Vector]:
    """Coordinate vectors of a basis of C(u) = ker ad_u."""
    return list(ad_operator(basis, u).kernel().columns())


def _restricted_operator(op: RatMatrix, subspace: Sequence[Vector]) -> RatMatrix | None:
    """Matrix of ``op`` on the span of ``subspace``, or None if not invariant."""
    if not subspace:
        return RatMatrix.zeros(0)
    frame = RatMatrix.from_columns(list(subspace))
    images = op @ frame
    return frame.solve(images)


def centralizer_spectrum(basis: Sequence[RatMatrix], triple: Sl2Triple) -> CentralizerSpectrum:
    """Eigenvalue multiplicities of ad_X restricted to C(U').

    Eigenvalues are searched among the integers 0..2(size-1); their
    multiplicities must exhaust dim C(U').
    """
    if not verify_triple(triple):
        raise InvalidTripleError("bracket relations fail")
    cent = centralizer(basis, triple.u_prime)
    restricted = _restricted_operator(ad_operator(basis, triple.x), cent)
    if restricted is None:
        raise InvalidTripleError("ad_X does not preserve the centralizer of U'")
    cp = char_poly(restricted)
    bound = 2 * (triple.size - 1)
    multiplicities = {n: cp.multiplicity(n) for n in range(bound + 1)}
    found = sum(multiplicities.values())
    if found != len(cent):
        raise InvalidTripleError(
            f"ad_X on C(U') has {len(cent) - found} eigenvalues outside 0..{bound}"
        )
    logger.debug("Centralizer spectrum", dimension=len(cent), multiplicities={k: v for k, v in multiplicities.items() if v})
    return CentralizerSpectrum(multiplicities=multiplicities)


def entropy_via_triple(basis: Sequence[RatMatrix], triple: Sl2Triple) -> tuple[CentralizerSpectrum, Fraction]:
    """Spectrum of ad_X on C(U') and R = sum d_n n(n+1)/2."""
    spectrum = centralizer_spectrum(basis, triple)
    return spectrum, r_sl2_spectrum(spectrum)


def jacobson_morozov(basis: Sequence[RatMatrix], u: RatMatrix) -> Sl2Triple:
    """An sl(2)-triple with U' = u, built from two exact linear systems.

    First a neutral element H = [E, Z] with [H, E] = 2E is found by solving
    ad_E^2 Z = -2E. Then F solves [E, F] = H together with [H, F] = -2F.
    """
    ad_e = ad_operator(basis, u)
    if nilpotency_index(ad_e) is None:
        raise NoRationalTripleError("u is not ad-nilpotent")
    e = coordinates(basis, [u]).column(0)
    z = (ad_e @ ad_e).solve_vector([-2 * c for c in e])
    if z is None:
        raise NoRationalTripleError("neutral element")
    h = ad_e.apply(z)
    ad_h = ad_operator(basis, combine(basis, h))
    n = len(basis)
    system = RatMatrix.vstack(ad_e, ad_h + RatMatrix.identity(n).scale(2))
    f = system.solve_vector(list(h) + [0] * n)
    if f is None:
        raise NoRationalTripleError("nilnegative element")
    triple = Sl2Triple(v=combine(basis, f), x=combine(basis, h), u_prime=u)
    if not verify_triple(triple):
        raise NoRationalTripleError("bracket relations")
    logger.debug("Jacobson-Morozov triple built", dimension=n)
    return triple
