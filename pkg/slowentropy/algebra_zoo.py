"""Concrete matrix Lie algebras and flow generators.

Every constructor returns a bracket-closed basis (a list of RatMatrix) and,
where a flow is part of the example, its generator U.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from config import get_logger
from models import AlgebraSpec, MatrixModel, SymPowerSpec

from ._errors import InvalidParameterError, NotBracketClosedError, UnsupportedRepresentationError
from .exact_linalg import (
    RatMatrix,
    Scalar,
    as_rational,
    bracket,
    coordinates,
    nilpotent_exp,
)

logger = get_logger("slowentropy.algebra_zoo")

Algebra = tuple[list[RatMatrix], RatMatrix]

MAX_SYM_DIMENSION = 200


def sl_basis(d: int) -> list[RatMatrix]:
    """Basis of sl(d): E_ij (i != j) row by row, then H_i = E_ii - E_{i+1,i+1}."""
    if d < 2:
        raise InvalidParameterError(f"sl(d) needs d >= 2, got {d}")
    basis = [RatMatrix.unit(d, i, j) for i in range(d) for j in range(d) if i != j]
    for i in range(d - 1):
        basis.append(RatMatrix.diagonal([1 if k == i else -1 if k == i + 1 else 0 for k in range(d)]))
    return basis


def principal_nilpotent(d: int) -> RatMatrix:
    """Single Jordan block of size d (ones on the superdiagonal)."""
    return block_nilpotent([d])


def block_nilpotent(k: Sequence[int]) -> RatMatrix:
    """Block-diagonal nilpotent with Jordan blocks of the given sizes."""
    if not k or any(b < 1 for b in k):
        raise InvalidParameterError("block sizes must be positive")
    blocks = [RatMatrix.from_rows([[1 if j == i + 1 else 0 for j in range(b)] for i in range(b)]) for b in k]
    return RatMatrix.block_diag(*blocks)


def check_bracket_closed(basis: Sequence[RatMatrix]) -> bool:
    """True when every bracket of basis elements stays in their span."""
    brackets = [bracket(a, b) for i, a in enumerate(basis) for b in basis[i + 1 :]]
    if not brackets:
        return True
    try:
        coordinates(basis, brackets)
    except NotBracketClosedError:
        return False
    return True


# ---- skew-shift (nilpotent) example -------------------------------------


def _log_shift(d: int) -> RatMatrix:
    """log(I + N_d), with entries (-1)^(k+1)/k on the k-th superdiagonal."""
    return RatMatrix.from_rows(
        [[Fraction((-1) ** (j - i + 1), j - i) if j > i else 0 for j in range(d)] for i in range(d)]
    )


def _embed(size: int, block: RatMatrix, offset: int) -> RatMatrix:
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(block.rows):
        for j in range(block.cols):
            rows[offset + i][offset + j] = block[i, j]
    return RatMatrix.from_rows(rows)


def heisenberg_type(d: int, alpha: Scalar | float) -> Algebra:
    """The (d+1)-dimensional algebra whose flow covers the skew-shift on T^d.

    Elements are U(x, t) with x in the first row and t log(I + N_d) in the
    lower-right d x d corner. The generator is U(a, 1) with
    a_j = (-1)^(j+1) alpha / j. For d = 1 the corner is 1 x 1 and vanishes, so
    the t-direction is recorded in an extra 2 x 2 nilpotent block.
    """
    if d < 1:
        raise InvalidParameterError(f"torus dimension must be positive, got {d}")
    a = _rational_speed(alpha)
    size = d + 1 if d >= 2 else d + 3
    x_basis = [RatMatrix.unit(size, 0, j + 1) for j in range(d)]
    if d >= 2:
        t_element = _embed(size, _log_shift(d), 1)
    else:
        t_element = RatMatrix.unit(size, 2, 3)
    basis = x_basis + [t_element]
    u = t_element
    for j in range(1, d + 1):
        u = u + x_basis[j - 1].scale(Fraction((-1) ** (j + 1), j) * a)
    return basis, u


def heisenberg_lattice_generator(d: int) -> RatMatrix:
    """exp(U(0, 1)), an integer unipotent matrix for d >= 2."""
    if d < 2:
        raise InvalidParameterError("the lattice generator needs d >= 2")
    _, t_element = heisenberg_type(d, 0)
    return nilpotent_exp(t_element)


# ---- twisted (semidirect) example ---------------------------------------


def _monomials(d: int, n: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree-n monomials in d variables, lex descending."""
    out = []
    for combo in combinations_with_replacement(range(d), n):
        mu = [0] * d
        for i in combo:
            mu[i] += 1
        out.append(tuple(mu))
    return out


def sym_power_rep(d: int, n: int, a: RatMatrix) -> RatMatrix:
    """Matrix of the derivation induced by ``a`` on Sym^n(R^d), monomial basis."""
    if a.shape != (d, d):
        raise InvalidParameterError(f"expected a {d}x{d} matrix")
    monomials = _monomials(d, n)
    index = {mu: k for k, mu in enumerate(monomials)}
    size = len(monomials)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for col, mu in enumerate(monomials):
        for i in range(d):
            if not mu[i]:
                continue
            for j in range(d):
                coef = a[j, i]
                if not coef:
                    continue
                nu = list(mu)
                nu[i] -= 1
                nu[j] += 1
                rows[index[tuple(nu)]][col] += mu[i] * coef
    return RatMatrix.from_rows(rows) if size else RatMatrix.zeros(0)


def twisted_algebra(k: Sequence[int], rho: SymPowerSpec) -> Algebra:
    """sl(d) acting on Sym^n(R^d), as block matrices diag(A, drho(A), 0) plus the ideal.

    The ideal R^N sits in the last column of the lower block; U is
    diag(U_ss, drho(U_ss), 0) with U_ss the block nilpotent of sizes k.
    """
    if rho.kind != "sym":
        raise UnsupportedRepresentationError(f"unsupported representation {rho.kind!r}")
    d = sum(k)
    if d < 2:
        raise InvalidParameterError("the semisimple part needs d >= 2")
    n_dim = comb(d + rho.n - 1, rho.n)
    if n_dim > MAX_SYM_DIMENSION:
        raise UnsupportedRepresentationError(
            f"Sym^{rho.n} of R^{d} has dimension {n_dim} > {MAX_SYM_DIMENSION}"
        )
    size = d + n_dim + 1

    def lift(a: RatMatrix) -> RatMatrix:
        return RatMatrix.block_diag(a, sym_power_rep(d, rho.n, a), RatMatrix.zeros(1))

    basis = [lift(b) for b in sl_basis(d)]
    basis += [RatMatrix.unit(size, d + i, size - 1) for i in range(n_dim)]
    u = lift(block_nilpotent(k))
    logger.debug("Twisted algebra built", d=d, sym=rho.n, dimension=len(basis))
    return basis, u


# ---- synthetic realisations ---------------------------------------------


def _rational_speed(alpha: Scalar | float) -> Fraction:
    if isinstance(alpha, float):
        return Fraction(repr(alpha))
    return as_rational(alpha)


def synthetic_from_structure(
    depths: Sequence[int],
    doubles: Sequence[tuple[int, Scalar | float]] = (),
) -> Algebra:
    """An abelian algebra R^D with a generator realizing a chain structure.

    Chains of depth m become Jordan blocks J_{m+1}; a double chain of depth m
    and speed alpha becomes J_{m+1} (x) I_2 + I_{m+1} (x) Q_alpha with
    Q_alpha = [[0, alpha], [-alpha, 0]]. The basis is the ideal of last-column
    matrices and U acts on it through the block matrix; U itself is not in
    the span.
    """
    if any(m < 0 for m in depths) or any(m < 0 for m, _ in doubles):
        raise InvalidParameterError("depths must be non-negative")
    blocks: list[RatMatrix] = []
    for m in depths:
        blocks.append(block_nilpotent([m + 1]))
    for m, alpha in doubles:
        a = _rational_speed(alpha)
        if a <= 0:
            raise InvalidParameterError("rotation speeds must be positive")
        size = 2 * (m + 1)
        rows = [[Fraction(0)] * size for _ in range(size)]
        for j in range(m + 1):
            rows[2 * j][2 * j + 1] = a
            rows[2 * j + 1][2 * j] = -a
            if j < m:
                rows[2 * j][2 * j + 2] = Fraction(1)
                rows[2 * j + 1][2 * j + 3] = Fraction(1)
        blocks.append(RatMatrix.from_rows(rows))
    if not blocks:
        raise InvalidParameterError("empty chain structure")
    action = RatMatrix.block_diag(*blocks)
    dim = action.rows
    u = RatMatrix.block_diag(action, RatMatrix.zeros(1))
    basis = [RatMatrix.unit(dim + 1, i, dim) for i in range(dim)]
    return basis, u


# ---- JSON ----------------------------------------------------------------


def _matrix_model(m: RatMatrix) -> MatrixModel:
    return MatrixModel.model_validate(m.to_json())


def to_spec(name: str, basis: Sequence[RatMatrix], u: RatMatrix | None) -> AlgebraSpec:
    return AlgebraSpec(
        name=name,
        basis=[_matrix_model(b) for b in basis],
        u=_matrix_model(u) if u is not None else None,
    )


def from_spec(spec: AlgebraSpec) -> tuple[list[RatMatrix], RatMatrix | None]:
    basis = [RatMatrix.from_json(b.model_dump()) for b in spec.basis]
    u = RatMatrix.from_json(spec.u.model_dump()) if spec.u is not None else None
    return basis, u
