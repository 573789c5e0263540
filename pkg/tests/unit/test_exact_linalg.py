"""Tests for exact rational linear algebra."""

from fractions import Fraction

import numpy as np
import pytest

from slowentropy._errors import DependentBasisError, DimensionMismatchError, NotBracketClosedError, SlowEntropyError
from slowentropy.algebra_zoo import block_nilpotent, principal_nilpotent, sl_basis
from slowentropy.exact_linalg import (
    RatMatrix,
    ad_operator,
    as_rational,
    bracket,
    char_poly,
    combine,
    coordinates,
    jordan_chevalley,
    nilpotency_index,
    nilpotent_exp,
    nilpotent_log,
    poly_gcd,
    square_free_part,
)

F = Fraction


class TestRatMatrix:
    """Construction, arithmetic and elimination."""

    def test_as_rational(self):
        assert as_rational("3/6") == F(1, 2)
        assert as_rational(4) == F(4)
        with pytest.raises(TypeError):
            as_rational(True)
        with pytest.raises(TypeError):
            as_rational(0.5)

    def test_immutable(self):
        m = RatMatrix.identity(2)
        with pytest.raises(AttributeError):
            m.rows = 3

    def test_arithmetic(self):
        a = RatMatrix.from_rows([[1, 2], [3, 4]])
        b = RatMatrix.from_rows([[0, F(1, 2)], [1, 0]])
        assert a @ b == RatMatrix.from_rows([[2, F(1, 2)], [4, F(3, 2)]])
        assert (a + b) - b == a
        assert (-a).scale(-1) == a
        assert a.transpose()[0, 1] == 3
        assert a.trace() == 5
        assert a.power(0) == RatMatrix.identity(2)
        assert a.power(3) == a @ a @ a

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            RatMatrix.zeros(2, 3) @ RatMatrix.zeros(2, 3)
        with pytest.raises(DimensionMismatchError):
            RatMatrix.zeros(2) + RatMatrix.zeros(3)

    def test_rank_and_kernel(self):
        m = RatMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert m.rank() == 2
        k = m.kernel()
        assert k.shape == (3, 1)
        assert (m @ k).is_zero()

    def test_kernel_of_zero_matrix_is_identity(self):
        assert RatMatrix.zeros(2, 3).kernel() == RatMatrix.identity(3)

    def test_solve_and_inverse(self):
        m = RatMatrix.from_rows([[2, 1], [1, 1]])
        assert m.inverse() == RatMatrix.from_rows([[1, -1], [-1, 2]])
        assert m.solve_vector([3, 2]) == (F(1), F(1))
        singular = RatMatrix.from_rows([[1, 1], [1, 1]])
        assert singular.solve_vector([1, 0]) is None
        with pytest.raises(ZeroDivisionError):
            singular.inverse()

    def test_block_diag_and_stacks(self):
        m = RatMatrix.block_diag(RatMatrix.identity(1), RatMatrix.from_rows([[0, 1], [0, 0]]))
        assert m.shape == (3, 3)
        assert m[1, 2] == 1
        assert RatMatrix.vstack(RatMatrix.identity(2), RatMatrix.zeros(1, 2)).shape == (3, 2)
        with pytest.raises(DimensionMismatchError):
            RatMatrix.hstack(RatMatrix.identity(2), RatMatrix.zeros(3, 1))

    def test_json_and_float(self):
        m = RatMatrix.from_rows([[F(1, 3), -2]])
        assert m.to_json() == {"rows": 1, "cols": 2, "entries": [["1/3", "-2"]]}
        assert RatMatrix.from_json(m.to_json()) == m
        assert np.allclose(m.to_float(), [[1 / 3, -2.0]])
        assert RatMatrix.from_float([[0.25, 1.5]]) == RatMatrix.from_rows([[F(1, 4), F(3, 2)]])

    def test_column_space_basis(self):
        m = RatMatrix.from_rows([[1, 2, 0], [0, 0, 1]])
        assert m.column_space_basis() == RatMatrix.identity(2)


class TestLieHelpers:
    """Brackets, coordinates and the ad operator."""

    def test_sl2_brackets(self):
        e, f, h = sl_basis(2)
        assert bracket(h, e) == e.scale(2)
        assert bracket(h, f) == f.scale(-2)
        assert bracket(e, f) == h

    def test_coordinates_and_combine(self):
        basis = sl_basis(3)
        x = combine(basis, list(range(1, 9)))
        coords = coordinates(basis, [x])
        assert coords.column(0) == tuple(F(i) for i in range(1, 9))

    def test_dependent_basis(self):
        e = RatMatrix.unit(2, 0, 1)
        with pytest.raises(DependentBasisError):
            coordinates([e, e.scale(2)], [e])

    def test_outside_span_reports_index(self):
        basis = [RatMatrix.unit(2, 0, 1)]
        with pytest.raises(NotBracketClosedError) as info:
            coordinates(basis, [basis[0], RatMatrix.unit(2, 1, 0)])
        assert info.value.index == 1

    def test_ad_of_sl2_nilpotent(self):
        basis = sl_basis(2)
        ad = ad_operator(basis, basis[0])
        assert ad.rank() == 2
        assert nilpotency_index(ad) == 3

    def test_ad_of_non_closed_span(self):
        basis = [RatMatrix.unit(2, 0, 1)]
        with pytest.raises(NotBracketClosedError):
            ad_operator(basis, RatMatrix.unit(2, 1, 0))


class TestNilpotent:
    """Nilpotency, exp and log."""

    def test_nilpotency_index(self):
        assert nilpotency_index(principal_nilpotent(4)) == 4
        assert nilpotency_index(block_nilpotent([1, 3])) == 3
        assert nilpotency_index(RatMatrix.zeros(3)) == 1
        assert nilpotency_index(RatMatrix.identity(2)) is None

    def test_exp_log_inverse(self):
        n = principal_nilpotent(4).scale(F(2, 3))
        g = nilpotent_exp(n)
        assert g[0, 3] == F(8, 27) / 6
        assert nilpotent_log(g) == n

    def test_exp_requires_nilpotent(self):
        with pytest.raises(SlowEntropyError):
            nilpotent_exp(RatMatrix.identity(2))


class TestCharPoly:
    """Characteristic polynomial and Jordan-Chevalley decomposition."""

    def test_char_poly_matches_numpy(self):
        m = RatMatrix.from_rows([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
        cp = char_poly(m)
        expected = np.poly(m.to_float())[::-1]
        assert np.allclose([float(c) for c in cp.coefficients], expected)
        assert cp.degree == 3

    def test_char_poly_needs_row_swap(self):
        m = RatMatrix.from_rows([[1, 2, 3], [0, 4, 5], [6, 0, 7]])
        expected = np.poly(m.to_float())[::-1]
        assert np.allclose([float(c) for c in char_poly(m).coefficients], expected)

    def test_multiplicity_and_square_free(self):
        # (x - 1)^2 (x + 2)
        cp = char_poly(RatMatrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, -2]]))
        assert cp.multiplicity(1) == 2
        assert cp.multiplicity(-2) == 1
        assert cp.multiplicity(0) == 0
        assert square_free_part(cp.coefficients) == (F(-2), F(1), F(1))

    def test_poly_gcd_monic(self):
        assert poly_gcd([F(-1), F(0), F(1)], [F(2), F(2)]) == (F(1), F(1))

    def test_jordan_chevalley_nilpotent_shortcut(self):
        n = principal_nilpotent(3)
        s, nil = jordan_chevalley(n)
        assert s.is_zero()
        assert nil == n

    def test_jordan_chevalley_rotation_plus_shear(self):
        # Rotation generator tensored with a 2-block plus the shear.
        m = RatMatrix.from_rows(
            [
                [0, 1, 1, 0],
                [-1, 0, 0, 1],
                [0, 0, 0, 1],
                [0, 0, -1, 0],
            ]
        )
        s, nil = jordan_chevalley(m)
        assert s + nil == m
        assert s @ nil == nil @ s
        assert nilpotency_index(nil) == 2
        assert s == RatMatrix.from_rows([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
