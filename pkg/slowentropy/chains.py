"""Chain bases of quasi-unipotent ad-operators.

A chain is a sequence X_0, ..., X_m with ad_U X_j = X_{j-1} and ad_U X_0 = 0.
A double chain carries pairs (X_{j,0}, X_{j,1}) rotated at speed alpha by the
semisimple part Q of ad_U:

    ad_Q X_{j,0} = -alpha X_{j,1},    ad_Q X_{j,1} = alpha X_{j,0}

and shifted down by the nilpotent part. Chains belonging to the eigenvalue 0
are computed exactly; double chains come from a numerical eigendecomposition
of the (exactly computed) semisimple part.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy.linalg import null_space

from config import get_logger, get_settings
from models import ChainStructure, EntropyMethod, EntropyReport, JordanLengths

from ._errors import (
    InvalidParameterError,
    NotQuasiUnipotentError,
    SpectralClusteringError,
)
from .exact_linalg import RatMatrix, Vector, ad_operator, jordan_chevalley, nilpotency_index

logger = get_logger("slowentropy.chains")

FloatVector = tuple[float, ...]


@dataclass(frozen=True)
class Chain:
    """X_0, ..., X_m in coordinates of the algebra basis."""

    vectors: tuple[Vector, ...]

    @property
    def depth(self) -> int:
        return len(self.vectors) - 1


@dataclass(frozen=True)
class DoubleChain:
    """Pairs (X_{j,0}, X_{j,1}), j = 0..m, rotating at speed ``alpha``."""

    alpha: float
    vectors: tuple[tuple[FloatVector, FloatVector], ...]

    @property
    def depth(self) -> int:
        return len(self.vectors) - 1


@dataclass(frozen=True)
class QuasiUnipotenceWitness:
    """Outcome of the quasi-unipotence test, with the splitting it used."""

    verdict: bool
    path: Literal["exact", "numeric"]
    semisimple: RatMatrix
    nilpotent: RatMatrix
    eigenvalues: tuple[complex, ...] = ()
    offending: complex | None = None

    def __bool__(self) -> bool:
        return self.verdict


@dataclass(frozen=True)
class ChainBasisCheck:
    """Result of re-multiplying a chain basis through ad_U."""

    relations_exact: bool
    double_residual: float
    independent: bool
    complete: bool
    asymmetric_bottoms: tuple[int, ...] = field(default=())

    def ok(self, tol: float) -> bool:
        return self.relations_exact and self.double_residual <= tol and self.independent and self.complete


def _resolve_tol(tol: float | None) -> float:
    return get_settings().spectral_tol if tol is None else tol


def is_quasi_unipotent(ad_u: RatMatrix, tol: float | None = None) -> QuasiUnipotenceWitness:
    """Decide whether every eigenvalue of ad_U is purely imaginary.

    Nilpotent operators are certified exactly. Otherwise the semisimple part
    is split off exactly and its eigenvalues are computed in floating point;
    an eigenvalue with |Re| >= tol rejects.
    """
    tol = _resolve_tol(tol)
    n = ad_u.rows
    if nilpotency_index(ad_u) is not None:
        return QuasiUnipotenceWitness(
            verdict=True,
            path="exact",
            semisimple=RatMatrix.zeros(n),
            nilpotent=ad_u,
            eigenvalues=(0j,) * n,
        )
    s, nil = jordan_chevalley(ad_u)
    eigenvalues = tuple(complex(z) for z in np.linalg.eigvals(s.to_float()))
    bad = [z for z in eigenvalues if abs(z.real) >= tol]
    offending = max(bad, key=lambda z: abs(z.real)) if bad else None
    if offending is not None:
        logger.info("Not quasi-unipotent", eigenvalue=str(offending))
    return QuasiUnipotenceWitness(
        verdict=not bad,
        path="numeric",
        semisimple=s,
        nilpotent=nil,
        eigenvalues=eigenvalues,
        offending=offending,
    )


class _Span:
    """Incremental exact span, reducing new vectors against stored pivots."""

    def __init__(self) -> None:
        self._rows: dict[int, list[Fraction]] = {}

    def add(self, vector: Sequence[Fraction]) -> bool:
        """Add ``vector``; return True when it was independent."""
        w = list(vector)
        for p, r in self._rows.items():
            c = w[p]
            if c:
                w = [a - c * b for a, b in zip(w, r)]
        pivot = next((i for i, a in enumerate(w) if a), None)
        if pivot is None:
            return False
        lead = w[pivot]
        self._rows[pivot] = [a / lead for a in w]
        return True


class _FloatSpan:
    """Incremental orthonormal span over the complex numbers."""

    def __init__(self, dim: int, rtol: float) -> None:
        self._q = np.zeros((dim, 0), dtype=complex)
        self._rtol = rtol

    def add(self, vector: npt.NDArray[np.complex128]) -> bool:
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            return False
        residual = vector - self._q @ (self._q.conj().T @ vector)
        rnorm = float(np.linalg.norm(residual))
        if rnorm <= self._rtol * norm:
            return False
        self._q = np.column_stack([self._q, residual / rnorm])
        return True


def _exact_chains(nil: RatMatrix, constraint: RatMatrix | None) -> list[Chain]:
    """Jordan chains of ``nil`` on ker(constraint) (the whole space if None).

    Heads are chosen top-down: at each length k, kernel vectors of N^k are
    taken in basis order whenever they are independent of ker N^(k-1) and of
    the images of the heads already chosen.
    """
    n = nil.rows

    def level_kernel(power: RatMatrix) -> list[Vector]:
        stacked = power if constraint is None else RatMatrix.vstack(constraint, power)
        return list(stacked.kernel().columns())

    target = n if constraint is None else n - constraint.rank()
    kernels: list[list[Vector]] = [[]]
    power = RatMatrix.identity(n)
    while len(kernels[-1]) < target:
        power = power @ nil
        kernels.append(level_kernel(power))
        if len(kernels) > n + 2:
            raise AssertionError("kernel filtration did not stabilize")

    heads: list[tuple[int, Vector]] = []
    for level in range(len(kernels) - 1, 0, -1):
        span = _Span()
        for v in kernels[level - 1]:
            span.add(v)
        for length, h in heads:
            image = h
            for _ in range(length - level):
                image = nil.apply(image)
            span.add(image)
        for v in kernels[level]:
            if span.add(v):
                heads.append((level, v))

    chains = []
    for length, h in heads:
        seq = [h]
        for _ in range(length - 1):
            seq.append(nil.apply(seq[-1]))
        chains.append(Chain(vectors=tuple(reversed(seq))))
    logger.debug("Exact chains extracted", depths=[c.depth for c in chains])
    return chains


def _numeric_chains(a: npt.NDArray[np.complex128], rtol: float) -> list[tuple[int, npt.NDArray[np.complex128]]]:
    """Jordan chain heads (length, vector) of a numerically nilpotent matrix."""
    k = a.shape[0]
    scale = max(float(np.linalg.norm(a)), 1.0)
    kernels: list[npt.NDArray[np.complex128]] = [np.zeros((k, 0), dtype=complex)]
    power = np.eye(k, dtype=complex)
    while kernels[-1].shape[1] < k:
        power = power @ a
        if float(np.linalg.norm(power)) <= rtol * scale:
            kernels.append(np.eye(k, dtype=complex))
        else:
            kernels.append(null_space(power, rcond=rtol))
        if len(kernels) > k + 2:
            raise AssertionError("numeric kernel filtration did not stabilize")

    heads: list[tuple[int, npt.NDArray[np.complex128]]] = []
    for level in range(len(kernels) - 1, 0, -1):
        span = _FloatSpan(k, 1e-6)
        for v in kernels[level - 1].T:
            span.add(v)
        for length, h in heads:
            image = h
            for _ in range(length - level):
                image = a @ image
            span.add(image)
        for v in kernels[level].T:
            if span.add(v):
                heads.append((level, v))
    return heads


def _cluster_imaginary(eigenvalues: Sequence[complex], tol: float) -> list[tuple[float, int]]:
    """Group positive imaginary parts into clusters (center, multiplicity)."""
    positive = sorted(z.imag for z in eigenvalues if z.imag > tol)
    clusters: list[list[float]] = []
    previous = 0.0
    for value in positive:
        gap = value - previous
        if clusters and gap <= tol:
            clusters[-1].append(value)
        elif gap < 2 * tol:
            raise SpectralClusteringError(previous, value, tol)
        else:
            clusters.append([value])
        previous = value
    return [(float(np.mean(c)), len(c)) for c in clusters]


def _double_chains(s: RatMatrix, nil: RatMatrix, eigenvalues: Sequence[complex], tol: float) -> list[DoubleChain]:
    s_f = s.to_float()
    n_f = nil.to_float()
    n = s.rows
    doubles: list[DoubleChain] = []
    for alpha, mult in _cluster_imaginary(eigenvalues, tol):
        _, _, vh = np.linalg.svd(s_f - 1j * alpha * np.eye(n))
        eigenspace = vh[n - mult :].conj().T
        restricted = eigenspace.conj().T @ n_f @ eigenspace
        for length, head in _numeric_chains(restricted, 1e-8):
            seq = [head]
            for _ in range(length - 1):
                seq.append(restricted @ seq[-1])
            zs = [eigenspace @ v for v in reversed(seq)]
            bottom = zs[0]
            mags = np.abs(bottom)
            first = int(np.argmax(mags > 1e-8 * mags.max()))
            phase = bottom[first] / mags[first]
            zs = [z * np.conj(phase) for z in zs]
            # refine the speed from the bottom vector
            refined = complex(np.vdot(zs[0], s_f @ zs[0]) / np.vdot(zs[0], zs[0])).imag
            doubles.append(
                DoubleChain(
                    alpha=refined,
                    vectors=tuple((tuple(map(float, z.real)), tuple(map(float, z.imag))) for z in zs),
                )
            )
        logger.debug("Double chains extracted", alpha=alpha, multiplicity=mult)
    return doubles


def chain_basis(
    ad_u: RatMatrix,
    tol: float | None = None,
    witness: QuasiUnipotenceWitness | None = None,
) -> tuple[list[Chain], list[DoubleChain]]:
    """Decompose the algebra into chains and double chains of ad_U.

    Raises NotQuasiUnipotentError when ad_U has an eigenvalue off the
    imaginary axis and SpectralClusteringError when imaginary eigenvalues
    cannot be grouped reliably at ``tol``.
    """
    tol = _resolve_tol(tol)
    witness = witness or is_quasi_unipotent(ad_u, tol)
    if not witness:
        raise NotQuasiUnipotentError(witness.offending or 0j, tol)
    s, nil = witness.semisimple, witness.nilpotent
    if s.is_zero():
        return _exact_chains(nil, None), []

    zero_dim = s.rows - s.rank()
    near_zero = sum(1 for z in witness.eigenvalues if abs(z.imag) <= tol)
    if near_zero != zero_dim:
        raise SpectralClusteringError(0.0, tol, tol)
    chains = _exact_chains(nil, s) if zero_dim else []
    doubles = _double_chains(s, nil, witness.eigenvalues, tol)
    return chains, doubles


def chain_structure(chains: Sequence[Chain], doubles: Sequence[DoubleChain]) -> ChainStructure:
    """Canonical depth multiset, each double chain counted twice."""
    depths = [c.depth for c in chains]
    for d in doubles:
        depths.extend([d.depth, d.depth])
    return ChainStructure(
        depths=tuple(depths),
        alphas=tuple(d.alpha for d in doubles),
        double_depths=tuple(d.depth for d in doubles),
    )


def slow_entropy(structure: ChainStructure) -> Fraction:
    """R = sum of m(m+1)/2 over all chain depths."""
    return sum((Fraction(m * (m + 1), 2) for m in structure.depths), Fraction(0))


def sequence_entropy(structure: ChainStructure, lam: float) -> float:
    """Sequence entropy R log(lambda) along the times L lambda^k."""
    if not lam > 1:
        raise InvalidParameterError(f"lambda must exceed 1, got {lam}")
    return float(slow_entropy(structure)) * math.log(lam)


def verify_chain_basis(
    ad_u: RatMatrix,
    chains: Sequence[Chain],
    doubles: Sequence[DoubleChain],
    witness: QuasiUnipotenceWitness | None = None,
) -> ChainBasisCheck:
    """Re-multiply every chain relation through ad_U.

    Chains are checked exactly, double chains to floating precision. Bottoms
    of double chains lie in the centralizer of the nilpotent part but not in
    that of U; such bottoms are reported in ``asymmetric_bottoms``.
    """
    n = ad_u.rows
    relations_exact = True
    for chain in chains:
        below: Vector = (Fraction(0),) * n
        for x in chain.vectors:
            if ad_u.apply(x) != below:
                relations_exact = False
            below = x

    witness = witness or is_quasi_unipotent(ad_u)
    ad_f = ad_u.to_float()
    n_f = witness.nilpotent.to_float()
    residual = 0.0
    asymmetric: list[int] = []
    for index, double in enumerate(doubles):
        prev0 = np.zeros(n)
        prev1 = np.zeros(n)
        scale = max(max(float(np.linalg.norm(v)) for pair in double.vectors for v in pair), 1.0)
        for x0, x1 in double.vectors:
            v0, v1 = np.asarray(x0), np.asarray(x1)
            r0 = ad_f @ v0 - (prev0 - double.alpha * v1)
            r1 = ad_f @ v1 - (prev1 + double.alpha * v0)
            residual = max(residual, float(np.abs(r0).max()) / scale, float(np.abs(r1).max()) / scale)
            prev0, prev1 = v0, v1
        b0, b1 = (np.asarray(v) for v in double.vectors[0])
        in_nil_centralizer = max(float(np.abs(n_f @ b0).max()), float(np.abs(n_f @ b1).max())) <= 1e-8 * scale
        in_u_centralizer = max(float(np.abs(ad_f @ b0).max()), float(np.abs(ad_f @ b1).max())) <= 1e-8 * scale
        if in_nil_centralizer and not in_u_centralizer:
            asymmetric.append(index)

    count = sum(len(c.vectors) for c in chains) + 2 * sum(len(d.vectors) for d in doubles)
    if doubles:
        columns = [np.array([float(a) for a in x]) for c in chains for x in c.vectors]
        columns += [np.asarray(v) for d in doubles for pair in d.vectors for v in pair]
        independent = int(np.linalg.matrix_rank(np.column_stack(columns))) == count if columns else True
    else:
        vectors = [x for c in chains for x in c.vectors]
        independent = RatMatrix.from_columns(vectors, rows=n).rank() == count if vectors else count == 0
    if asymmetric:
        logger.info("Double-chain bottoms outside C(U)", doubles=asymmetric)
    return ChainBasisCheck(
        relations_exact=relations_exact,
        double_residual=residual,
        independent=independent,
        complete=count == n,
        asymmetric_bottoms=tuple(asymmetric),
    )


def jordan_lengths(nilpotent: RatMatrix) -> JordanLengths:
    """Jordan block lengths of a nilpotent matrix from its rank profile."""
    if nilpotency_index(nilpotent) is None:
        raise InvalidParameterError("jordan_lengths requires a nilpotent matrix")
    n = nilpotent.rows
    ranks = [n]
    power = RatMatrix.identity(n)
    while ranks[-1] > 0:
        power = power @ nilpotent
        ranks.append(power.rank())
    ranks.append(0)
    lengths: list[int] = []
    for k in range(1, len(ranks) - 1):
        at_least_k = ranks[k - 1] - ranks[k]
        at_least_next = ranks[k] - ranks[k + 1]
        lengths.extend([k] * (at_least_k - at_least_next))
    return JordanLengths(lengths=tuple(sorted(lengths, reverse=True)))


def analyze(
    basis: Sequence[RatMatrix],
    u: RatMatrix,
    tol: float | None = None,
    lam: float | None = None,
    name: str | None = None,
) -> EntropyReport:
    """ad operator, quasi-unipotence, chain basis and R in one pass."""
    tol = _resolve_tol(tol)
    ad_u = ad_operator(basis, u)
    witness = is_quasi_unipotent(ad_u, tol)
    if not witness:
        raise NotQuasiUnipotentError(witness.offending or 0j, tol)
    chains, doubles = chain_basis(ad_u, tol, witness=witness)
    structure = chain_structure(chains, doubles)
    r = slow_entropy(structure)
    logger.info("Chain structure computed", depths=list(structure.depths), R=str(r), path=witness.path)
    return EntropyReport(
        R=str(r),
        method=EntropyMethod.CHAIN_BASIS,
        name=name,
        structure=structure,
        quasi_unipotence=witness.path,
        lam=lam,
        sequence_entropy=sequence_entropy(structure, lam) if lam is not None else None,
    )
