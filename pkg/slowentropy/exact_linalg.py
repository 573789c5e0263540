"""Exact rational dense linear algebra.

Everything here works on ``fractions.Fraction`` entries. Products and
eliminations are carried out on integer-scaled rows so the inner loops only
touch Python integers; results are converted back to reduced fractions.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
import numpy.typing as npt

from config import get_logger

from ._errors import (
    DependentBasisError,
    DimensionMismatchError,
    NotBracketClosedError,
    SlowEntropyError,
)

logger = get_logger("slowentropy.exact_linalg")

Scalar = Fraction | int | str
Vector = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value: Scalar) -> Fraction:
    """Convert an int, a Fraction or a "p/q" string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q", with q omitted when it is 1."""
    return str(value)


class RatMatrix:
    """Immutable dense matrix over the rationals, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    rows: int
    cols: int
    _data: Vector

    def __init__(self, rows: int, cols: int, entries: Iterable[Scalar]):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        data = tuple(as_rational(x) for x in entries)
        if len(data) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, "
                f"got {len(data)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def _raw(cls, rows: int, cols: int, data: Vector) -> RatMatrix:
        obj = cls.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "cols", cols)
        object.__setattr__(obj, "_data", data)
        return obj

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> RatMatrix:
        if not rows:
            return cls._raw(0, 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int | None = None) -> RatMatrix:
        if not columns:
            return cls._raw(rows or 0, 0, ())
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise ValueError("ragged columns")
        return cls(height, len(columns), (columns[j][i] for i in range(height) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> RatMatrix:
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, (_ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls._raw(n, n, tuple(_ONE if i == j else _ZERO for i in range(n) for j in range(n)))

    @classmethod
    def unit(cls, n: int, i: int, j: int, value: Scalar = 1) -> RatMatrix:
        """The matrix with a single nonzero entry ``value`` at (i, j)."""
        data = [_ZERO] * (n * n)
        data[i * n + j] = as_rational(value)
        return cls._raw(n, n, tuple(data))

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> RatMatrix:
        n = len(values)
        data = [_ZERO] * (n * n)
        for i, v in enumerate(values):
            data[i * n + i] = as_rational(v)
        return cls._raw(n, n, tuple(data))

    @classmethod
    def block_diag(cls, *blocks: RatMatrix) -> RatMatrix:
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        data = [_ZERO] * (rows * cols)
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                base = (r0 + i) * cols + c0
                data[base : base + b.cols] = b._data[i * b.cols : (i + 1) * b.cols]
            r0 += b.rows
            c0 += b.cols
        return cls._raw(rows, cols, tuple(data))

    @classmethod
    def vstack(cls, *blocks: RatMatrix) -> RatMatrix:
        cols = blocks[0].cols
        for b in blocks[1:]:
            if b.cols != cols:
                raise DimensionMismatchError("vstack", blocks[0].shape, b.shape)
        return cls._raw(sum(b.rows for b in blocks), cols, tuple(x for b in blocks for x in b._data))

    @classmethod
    def hstack(cls, *blocks: RatMatrix) -> RatMatrix:
        rows = blocks[0].rows
        for b in blocks[1:]:
            if b.rows != rows:
                raise DimensionMismatchError("hstack", blocks[0].shape, b.shape)
        data: list[Fraction] = []
        for i in range(rows):
            for b in blocks:
                data.extend(b._data[i * b.cols : (i + 1) * b.cols])
        return cls._raw(rows, sum(b.cols for b in blocks), tuple(data))

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> RatMatrix:
        entries = payload["entries"]
        rows = int(payload.get("rows", len(entries)))
        cols = int(payload.get("cols", len(entries[0]) if entries else 0))
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"entries do not match declared shape {rows}x{cols}")
        return cls(rows, cols, (x for r in entries for x in r))

    @classmethod
    def from_float(cls, array: npt.ArrayLike, max_denominator: int = 10**12) -> RatMatrix:
        a = np.atleast_2d(np.asarray(array, dtype=float))
        return cls(
            a.shape[0],
            a.shape[1],
            (Fraction(float(x)).limit_denominator(max_denominator) for x in a.ravel()),
        )

    # ---- accessors ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> Vector:
        return self._data

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {index} out of range for {self.rows}x{self.cols}")
        return self._data[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self._data[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self._data[j :: self.cols] if self.cols else ()

    def columns(self) -> Iterator[Vector]:
        for j in range(self.cols):
            yield self.column(j)

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def flatten(self) -> Vector:
        return self._data

    def is_zero(self) -> bool:
        return not any(self._data)

    def to_float(self) -> npt.NDArray[np.float64]:
        return np.array([float(x) for x in self._data], dtype=float).reshape(self.rows, self.cols)

    def to_json(self) -> dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[format_rational(x) for x in self.row(i)] for i in range(self.rows)],
        }

    # ---- arithmetic ---------------------------------------------------

    def _check_same_shape(self, other: RatMatrix, op: str) -> None:
        if self.shape != other.shape:
            raise DimensionMismatchError(op, self.shape, other.shape)

    def __add__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other, "add")
        return RatMatrix._raw(self.rows, self.cols, tuple(a + b for a, b in zip(self._data, other._data)))

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other, "sub")
        return RatMatrix._raw(self.rows, self.cols, tuple(a - b for a, b in zip(self._data, other._data)))

    def __neg__(self) -> RatMatrix:
        return RatMatrix._raw(self.rows, self.cols, tuple(-a for a in self._data))

    def scale(self, c: Scalar) -> RatMatrix:
        c = as_rational(c)
        return RatMatrix._raw(self.rows, self.cols, tuple(c * a for a in self._data))

    def _scaled_rows(self) -> tuple[list[list[int]], int]:
        """Integer rows and the common denominator they were scaled by."""
        den = math.lcm(*(x.denominator for x in self._data)) if self._data else 1
        ints = [x.numerator * (den // x.denominator) for x in self._data]
        return [ints[i * self.cols : (i + 1) * self.cols] for i in range(self.rows)], den

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise DimensionMismatchError("matmul", self.shape, other.shape)
        if self.cols == 0:
            return RatMatrix.zeros(self.rows, other.cols)
        a, da = self._scaled_rows()
        b, db = other._scaled_rows()
        bt = list(zip(*b))
        den = da * db
        data: list[Fraction] = []
        zero_row = (_ZERO,) * other.cols
        for row in a:
            if not any(row):
                data.extend(zero_row)
                continue
            nz = [(k, x) for k, x in enumerate(row) if x]
            for col in bt:
                s = 0
                for k, x in nz:
                    y = col[k]
                    if y:
                        s += x * y
                data.append(Fraction(s, den) if s else _ZERO)
        return RatMatrix._raw(self.rows, other.cols, tuple(data))

    def apply(self, vector: Sequence[Scalar]) -> Vector:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise DimensionMismatchError("apply", self.shape, (len(vector), 1))
        v = [as_rational(x) for x in vector]
        out = []
        for i in range(self.rows):
            s = _ZERO
            for a, x in zip(self.row(i), v):
                if a and x:
                    s += a * x
            out.append(s)
        return tuple(out)

    def transpose(self) -> RatMatrix:
        return RatMatrix._raw(
            self.cols,
            self.rows,
            tuple(self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def power(self, k: int) -> RatMatrix:
        if not self.is_square:
            raise DimensionMismatchError("power", self.shape, self.shape[::-1])
        if k < 0:
            return self.inverse().power(-k)
        result = RatMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def trace(self) -> Fraction:
        return sum((self._data[i * self.cols + i] for i in range(min(self.rows, self.cols))), _ZERO)

    # ---- elimination --------------------------------------------------

    def rank(self) -> int:
        _, pivots = _echelon(self, self.cols)
        return len(pivots)

    def kernel(self) -> RatMatrix:
        """A basis of the right kernel, as the columns of the returned matrix.

        Free columns are taken in increasing order; each basis vector has a 1
        in its free column and 0 in the other free columns.
        """
        rows, pivots = _echelon(self, self.cols)
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        vectors = []
        for f in free:
            x = [_ZERO] * self.cols
            x[f] = _ONE
            for i in range(len(pivots) - 1, -1, -1):
                p = pivots[i]
                r = rows[i]
                s = sum((r[j] * x[j] for j in range(p + 1, self.cols) if r[j] and x[j]), _ZERO)
                x[p] = -s / r[p]
            vectors.append(tuple(x))
        return RatMatrix.from_columns(vectors, rows=self.cols)

    def solve_columns(self, rhs: RatMatrix) -> list[Vector | None]:
        """Solve ``self @ x = rhs[:, j]`` for every column j.

        Returns one particular solution per column (free variables set to 0)
        or None for columns with no solution.
        """
        if rhs.rows != self.rows:
            raise DimensionMismatchError("solve", self.shape, rhs.shape)
        augmented = RatMatrix.hstack(self, rhs)
        rows, pivots = _echelon(augmented, self.cols)
        r = len(pivots)
        out: list[Vector | None] = []
        for c in range(rhs.cols):
            col = self.cols + c
            if any(rows[i][col] for i in range(r, self.rows)):
                out.append(None)
                continue
            x = [_ZERO] * self.cols
            for i in range(r - 1, -1, -1):
                p = pivots[i]
                row = rows[i]
                s = Fraction(row[col])
                for l in range(i + 1, r):
                    q = pivots[l]
                    if row[q] and x[q]:
                        s -= row[q] * x[q]
                x[p] = s / row[p]
            out.append(tuple(x))
        return out

    def solve(self, rhs: RatMatrix) -> RatMatrix | None:
        """A particular solution X of ``self @ X = rhs``, or None if inconsistent."""
        solutions = self.solve_columns(rhs)
        if any(s is None for s in solutions):
            return None
        return RatMatrix.from_columns([s for s in solutions if s is not None], rows=self.cols)

    def solve_vector(self, rhs: Sequence[Scalar]) -> Vector | None:
        return self.solve_columns(RatMatrix(len(rhs), 1, rhs))[0]

    def inverse(self) -> RatMatrix:
        if not self.is_square:
            raise DimensionMismatchError("inverse", self.shape, self.shape[::-1])
        inv = self.solve(RatMatrix.identity(self.rows))
        if inv is None or self.rank() < self.rows:
            raise ZeroDivisionError("singular matrix")
        return inv

    def column_space_basis(self) -> RatMatrix:
        """The pivot columns of the matrix, a basis of its column space."""
        _, pivots = _echelon(self, self.cols)
        return RatMatrix.from_columns([self.column(j) for j in pivots], rows=self.rows)

    # ---- protocol -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def _echelon(m: RatMatrix, pivot_cols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) row echelon form.

    Rows are scaled to integers individually, which leaves the row space
    unchanged. Pivots are searched column by column among the first
    ``pivot_cols`` columns, taking the lowest row index with a nonzero entry.
    """
    rows: list[list[int]] = []
    for i in range(m.rows):
        r = m.row(i)
        den = math.lcm(*(x.denominator for x in r)) if r else 1
        rows.append([x.numerator * (den // x.denominator) for x in r])
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(pivot_cols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        pivot_row = rows[r]
        pv = pivot_row[c]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (pv * row[j] - f * pivot_row[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (pv * row[j]) // prev
            row[c] = 0
        prev = pv
        pivots.append(c)
        r += 1
    return rows, pivots


# ---- Lie-algebraic helpers ---------------------------------------------


def bracket(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """The commutator ``ab - ba``."""
    if not (a.is_square and a.shape == b.shape):
        raise DimensionMismatchError("bracket", a.shape, b.shape)
    return a @ b - b @ a


def basis_matrix(basis: Sequence[RatMatrix]) -> RatMatrix:
    """Flattened basis elements as the columns of one matrix."""
    if not basis:
        raise ValueError("empty basis")
    shape = basis[0].shape
    for b in basis[1:]:
        if b.shape != shape:
            raise DimensionMismatchError("basis", shape, b.shape)
    return RatMatrix.from_columns([b.flatten() for b in basis])


def coordinates(basis: Sequence[RatMatrix], elements: Sequence[RatMatrix]) -> RatMatrix:
    """Coordinates of ``elements`` in ``basis``, one column per element.

    Raises DependentBasisError if the basis is dependent and
    NotBracketClosedError (with the element index) if an element is outside
    the span.
    """
    bmat = basis_matrix(basis)
    rank = bmat.rank()
    if rank < len(basis):
        raise DependentBasisError(len(basis), rank)
    if not elements:
        return RatMatrix.zeros(len(basis), 0)
    rhs = RatMatrix.from_columns([e.flatten() for e in elements])
    solutions = bmat.solve_columns(rhs)
    for i, s in enumerate(solutions):
        if s is None:
            raise NotBracketClosedError(i)
    return RatMatrix.from_columns([s for s in solutions if s is not None], rows=len(basis))


def combine(basis: Sequence[RatMatrix], coords: Sequence[Scalar]) -> RatMatrix:
    """The algebra element with the given coordinates."""
    if len(coords) != len(basis):
        raise DimensionMismatchError("combine", (len(basis), 1), (len(coords), 1))
    rows, cols = basis[0].shape
    acc = [_ZERO] * (rows * cols)
    for b, c in zip(basis, coords):
        c = as_rational(c)
        if not c:
            continue
        for k, x in enumerate(b.flatten()):
            if x:
                acc[k] += c * x
    return RatMatrix._raw(rows, cols, tuple(acc))


def ad_operator(basis: Sequence[RatMatrix], u: RatMatrix) -> RatMatrix:
    """The matrix of ``ad_u = [u, .]`` in ``basis``.

    ``u`` need not lie in the span of the basis; only closure of the span
    under bracketing with ``u`` is required.
    """
    images = [bracket(u, b) for b in basis]
    ad = coordinates(basis, images)
    logger.debug("ad operator built", dimension=len(basis))
    return ad


def nilpotency_index(m: RatMatrix) -> int | None:
    """Smallest k with m^k = 0, or None if m is not nilpotent."""
    if not m.is_square:
        raise DimensionMismatchError("nilpotency_index", m.shape, m.shape[::-1])
    n = m.rows
    if m.is_zero():
        return 1
    # m is nilpotent iff m^(2^j) = 0 for 2^j >= n
    p = m
    reach = 1
    while reach < n:
        p = p @ p
        reach *= 2
    if not p.is_zero():
        return None
    p = m
    for k in range(2, n + 1):
        p = p @ m
        if p.is_zero():
            return k
    return None


def nilpotent_exp(m: RatMatrix) -> RatMatrix:
    """Exact exponential of a nilpotent matrix (a finite sum)."""
    if nilpotency_index(m) is None:
        raise SlowEntropyError("nilpotent_exp requires a nilpotent matrix")
    result = RatMatrix.identity(m.rows)
    term = result
    k = 1
    while True:
        term = (term @ m).scale(Fraction(1, k))
        if term.is_zero():
            return result
        result = result + term
        k += 1


def nilpotent_log(g: RatMatrix) -> RatMatrix:
    """Exact logarithm of a unipotent matrix ``g = I + N``."""
    n = g - RatMatrix.identity(g.rows)
    if nilpotency_index(n) is None:
        raise SlowEntropyError("nilpotent_log requires a unipotent matrix")
    result = RatMatrix.zeros(g.rows)
    power = n
    k = 1
    while not power.is_zero():
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
        power = power @ n
        k += 1
    return result


# ---- polynomials --------------------------------------------------------

Poly = tuple[Fraction, ...]


def poly_trim(p: Sequence[Fraction]) -> Poly:
    out = list(p)
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def poly_derivative(p: Sequence[Fraction]) -> Poly:
    return poly_trim([k * p[k] for k in range(1, len(p))])


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Poly, Poly]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    if len(rem) < len(b):
        return (), tuple(rem)
    quot = [_ZERO] * (len(rem) - len(b) + 1)
    lead = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = rem[-1] / lead
        quot[shift] = c
        for i, x in enumerate(b):
            rem[shift + i] -= c * x
        rem = list(poly_trim(rem))
    return poly_trim(quot), tuple(rem)


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    """Monic greatest common divisor (Euclid)."""
    x, y = poly_trim(a), poly_trim(b)
    while y:
        x, y = y, poly_divmod(x, y)[1]
    if not x:
        return ()
    lead = x[-1]
    return tuple(c / lead for c in x)


def poly_eval_matrix(p: Sequence[Fraction], m: RatMatrix) -> RatMatrix:
    """p(m) by Horner's rule."""
    result = RatMatrix.zeros(m.rows)
    eye = RatMatrix.identity(m.rows)
    for c in reversed(poly_trim(p)):
        result = result @ m + eye.scale(c)
    return result


@dataclass(frozen=True)
class CharPoly:
    """Characteristic polynomial ``det(lambda I - m)``, lowest degree first."""

    coefficients: Poly

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, x: Scalar) -> Fraction:
        x = as_rational(x)
        acc = _ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return poly_derivative(self.coefficients)

    def is_pure_power(self) -> bool:
        """True when the polynomial is lambda^n."""
        return all(not c for c in self.coefficients[:-1])

    def multiplicity(self, root: Scalar) -> int:
        """Multiplicity of ``root`` as a zero of the polynomial."""
        root = as_rational(root)
        p = list(self.coefficients)
        count = 0
        while len(p) > 1:
            # synthetic division by (lambda - root)
            quotient = [_ZERO] * (len(p) - 1)
            acc = _ZERO
            for k in range(len(p) - 1, 0, -1):
                acc = acc * root + p[k]
                quotient[k - 1] = acc
            if acc * root + p[0]:
                break
            count += 1
            p = quotient
        return count

    def square_free_part(self) -> Poly:
        return square_free_part(self.coefficients)

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coefficients]


def square_free_part(p: Sequence[Fraction]) -> Poly:
    """p / gcd(p, p'), made monic."""
    p = poly_trim(p)
    g = poly_gcd(p, poly_derivative(p))
    q, r = poly_divmod(p, g) if g else (p, ())
    if r:
        raise SlowEntropyError("inexact square-free division")
    lead = q[-1]
    return tuple(c / lead for c in q)


def char_poly(m: RatMatrix) -> CharPoly:
    """Characteristic polynomial by exact reduction to Hessenberg form.

    The matrix is brought to upper Hessenberg form by elimination
    similarities, then the determinant recurrence for Hessenberg matrices
    gives the polynomial in O(n^3) rational operations.
    """
    if not m.is_square:
        raise DimensionMismatchError("char_poly", m.shape, m.shape[::-1])
    n = m.rows
    h = m.to_rows()
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        pv = h[j + 1][j]
        for k in range(j + 2, n):
            u = h[k][j] / pv
            if not u:
                continue
            rk, rp = h[k], h[j + 1]
            for c in range(n):
                if rp[c]:
                    rk[c] -= u * rp[c]
            for row in h:
                if row[k]:
                    row[j + 1] += u * row[k]
    polys: list[list[Fraction]] = [[_ONE]]
    for mm in range(1, n + 1):
        prev = polys[mm - 1]
        diag = h[mm - 1][mm - 1]
        poly = [_ZERO] * (mm + 1)
        for i, c in enumerate(prev):
            poly[i + 1] += c
            poly[i] -= diag * c
        t = _ONE
        for i in range(mm - 1, 0, -1):
            t *= h[i][i - 1]
            if not t:
                break
            coef = t * h[i - 1][mm - 1]
            if coef:
                for k, c in enumerate(polys[i - 1]):
                    poly[k] -= coef * c
        polys.append(poly)
    return CharPoly(tuple(polys[n]))


def jordan_chevalley(m: RatMatrix) -> tuple[RatMatrix, RatMatrix]:
    """Split ``m = S + N`` with S semisimple, N nilpotent and SN = NS.

    S is computed exactly by Newton iteration on the square-free part p of
    the characteristic polynomial: ``S <- S - p(S) p'(S)^-1``, starting from
    m. When the characteristic polynomial is lambda^n, S = 0.
    """
    if not m.is_square:
        raise DimensionMismatchError("jordan_chevalley", m.shape, m.shape[::-1])
    n = m.rows
    cp = char_poly(m)
    if cp.is_pure_power():
        return RatMatrix.zeros(n), m
    p = cp.square_free_part()
    dp = poly_derivative(p)
    s = m
    for step in range(n.bit_length() + 3):
        ps = poly_eval_matrix(p, s)
        if ps.is_zero():
            logger.debug("Jordan-Chevalley converged", steps=step, dimension=n)
            break
        s = s - ps @ poly_eval_matrix(dp, s).inverse()
    else:
        raise AssertionError("Newton iteration for the semisimple part did not converge")
    nil = m - s
    if s @ nil != nil @ s:
        raise AssertionError("semisimple and nilpotent parts do not commute")
    return s, nil
