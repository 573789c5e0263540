"""Tests for orbit divergence, polynomial suprema and the Monte Carlo estimators."""

import math
from fractions import Fraction

import numpy as np
import pytest

from models import ChainStructure, McConfig, SequenceConfig
from slowentropy.algebra_zoo import heisenberg_type, principal_nilpotent, sl_basis
from slowentropy._errors import (
    DegenerateFitError,
    DimensionMismatchError,
    InvalidParameterError,
    LogChartError,
    NoSeparationError,
)
from slowentropy.dynamics import (
    DivergenceState,
    _accept_continuous,
    adjoint_identity_discrepancy,
    bowen_boxes,
    brudnyi_trials,
    check_brudnyi,
    coefficient_bound,
    evolve,
    evolve_matrix_check,
    fit_loglog,
    fit_slope,
    layout_of,
    mc_bowen_volume,
    mc_sequence_bowen_volume,
    norm_equiv_constant,
    poly_abs_sup,
    poly_sup_interval,
    predicted_exponents,
    sequence_fit_start,
    shearing_trials,
    shearing_visit_fraction,
    visit_constant,
)


def _single(*depths):
    return ChainStructure(depths=depths)


class TestEvolve:
    """Closed-form divergence."""

    def test_single_chain(self):
        state = DivergenceState(chains=(np.array([0.0, 0.0, 1.0]),))
        assert evolve(state, 2.0).chains[0] == pytest.approx([2.0, 2.0, 1.0])

    def test_rotation_only(self):
        state = DivergenceState(chains=(), doubles=((np.array([1.0]), np.array([0.0]), 1.0),))
        b, c, alpha = evolve(state, math.pi / 2).doubles[0]
        assert b[0] == pytest.approx(0.0, abs=1e-12)
        assert c[0] == pytest.approx(1.0)
        assert alpha == 1.0

    def test_rotation_keeps_norm(self):
        state = DivergenceState(chains=(), doubles=((np.array([0.3]), np.array([0.4]), 2.5),))
        assert evolve(state, 7.3).norm() == pytest.approx(0.5)

    def test_group_law(self):
        layout = ((2, 0), ((1, 0.7),))
        state = DivergenceState.from_flat(layout, np.linspace(-1, 1, 8))
        once = evolve(evolve(state, 1.5), 2.0).flat()
        assert once == pytest.approx(evolve(state, 3.5).flat())

    def test_flat_round_trip_layout(self):
        layout = ((1,), ((0, 1.0),))
        state = DivergenceState.from_flat(layout, [1, 2, 3, 4])
        assert state.layout == layout
        assert state.doubles[0][0][0] == 3.0
        assert state.doubles[0][1][0] == 4.0

    def test_from_flat_wrong_size(self):
        with pytest.raises(DimensionMismatchError):
            DivergenceState.from_flat(((1,), ()), [1.0, 2.0, 3.0])


class TestMatrixCheck:
    """The closed form against matrix exponentials."""

    def test_sl2(self, sl2_principal):
        basis, u = sl2_principal
        assert evolve_matrix_check(basis, u, [0.0, 1e-3, 0.0], 5.0) < 1e-8

    def test_skew_shift(self, skew_shift_algebra):
        basis, u = skew_shift_algebra
        assert evolve_matrix_check(basis, u, [1e-3, -2e-3, 5e-4, 1e-3], 3.0) < 1e-8

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "algebra",
        [
            lambda: (sl_basis(2), principal_nilpotent(2)),
            lambda: (sl_basis(3), principal_nilpotent(3)),
            lambda: heisenberg_type(1, Fraction(1, 2)),
            lambda: heisenberg_type(2, Fraction(1, 3)),
            lambda: heisenberg_type(3, Fraction(1, 2)),
            lambda: heisenberg_type(4, Fraction(2, 5)),
        ],
        ids=["sl2", "sl3", "skew1", "skew2", "skew3", "skew4"],
    )
    def test_random_small_displacements(self, algebra):
        basis, u = algebra()
        rng = np.random.default_rng(8)
        for _ in range(100):
            x0 = rng.uniform(-1e-4, 1e-4, len(basis))
            t = float(rng.uniform(0.5, 3.0))
            assert evolve_matrix_check(basis, u, x0, t) < 1e-8

    def test_zero_displacement(self, sl2_principal):
        basis, u = sl2_principal
        assert evolve_matrix_check(basis, u, [0.0, 0.0, 0.0], 10.0) == 0.0

    def test_leaves_log_chart(self, sl2_principal):
        basis, u = sl2_principal
        with pytest.raises(LogChartError):
            evolve_matrix_check(basis, u, [0.0, 0.5, 0.0], 5.0)

    def test_adjoint_identities(self, sl2_principal):
        basis, _ = sl2_principal
        assert adjoint_identity_discrepancy(basis, [0.3, -0.2, 0.1], [0.1, 0.2, -0.3]) < 1e-10


class TestPolynomialSup:
    """Suprema on [0, 1] and subintervals."""

    @pytest.mark.parametrize(
        "coeffs,expected",
        [([0.0, 1.0], 1.0), ([0.0, 1.0, -1.0], 0.25), ([-2.0], 2.0), ([1.0, 0.0, 0.0], 1.0), ([0.0, 0.0, -1.0], 1.0)],
    )
    def test_roots_mode(self, coeffs, expected):
        assert poly_abs_sup([coeffs])[0] == pytest.approx(expected)

    def test_grid_mode_close_to_roots(self):
        rng = np.random.default_rng(3)
        coeffs = rng.standard_normal((50, 5))
        exact = poly_abs_sup(coeffs)
        grid = poly_abs_sup(coeffs, "grid", 2048)
        assert np.all(grid <= exact * (1 + 1e-12))
        assert grid == pytest.approx(exact, rel=1e-3)

    def test_interval(self):
        assert poly_sup_interval([0.0, 1.0], -2.0, 1.0) == pytest.approx(2.0)
        assert poly_sup_interval([0.0, 0.0, 1.0], 1.0, 3.0) == pytest.approx(9.0)

    def test_empty_interval(self):
        with pytest.raises(InvalidParameterError):
            poly_sup_interval([1.0], 1.0, 1.0)

    def test_coefficient_bound(self):
        assert coefficient_bound(0) == (Fraction(1),)
        assert coefficient_bound(1) == (Fraction(1), Fraction(2))
        assert coefficient_bound(2) == (Fraction(1), Fraction(8), Fraction(8))

    def test_norm_equivalence(self):
        result = norm_equiv_constant(3, 2000, seed=5)
        assert result.coefficient_over_sup <= result.certified_bound * (1 + 1e-9)
        assert result.sup_over_coefficient <= 4.0 + 1e-9

    def test_norm_equivalence_constant_and_linear(self):
        constant = norm_equiv_constant(0, 500, seed=1)
        assert constant.coefficient_over_sup == pytest.approx(1.0)
        assert constant.sup_over_coefficient == pytest.approx(1.0)
        assert constant.certified_bound == 1.0
        linear = norm_equiv_constant(1, 2000, seed=1)
        assert linear.certified_bound == 2.0
        assert 1.0 <= linear.coefficient_over_sup <= 2.0 + 1e-9
        assert 1.0 <= linear.sup_over_coefficient <= 2.0 + 1e-9


class TestBrudnyi:
    """Sup over an interval against sup over a subset."""

    def test_linear(self):
        assert check_brudnyi([0.0, 1.0], (0.0, 1.0), [(0.0, 0.5)])

    def test_zero_polynomial(self):
        assert check_brudnyi([0.0, 0.0], (0.0, 1.0), [(0.2, 0.3)])

    def test_omega_outside(self):
        with pytest.raises(InvalidParameterError):
            check_brudnyi([1.0, 1.0], (0.0, 1.0), [(0.5, 1.5)])

    def test_random_trials(self):
        summary = brudnyi_trials(500, 6, seed=11)
        assert summary.violations == 0
        assert summary.worst_ratio <= 1.0 + 1e-9

    @pytest.mark.slow
    def test_many_random_trials(self):
        summary = brudnyi_trials(10_000, 6, seed=12)
        assert summary.trials == 10_000
        assert summary.violations == 0


class TestBowenBoxes:
    """Nested boxes and predicted exponents."""

    def test_sides(self):
        boxes = bowen_boxes(_single(2), 0.1, 10.0)
        assert boxes.inner == pytest.approx([0.1 / math.e, 0.01 / math.e, 0.001 / math.e])
        assert boxes.outer == pytest.approx([0.1, 0.08, 0.016])

    def test_inner_box_is_accepted(self):
        structure = ChainStructure(depths=(2, 1, 1, 0), alphas=(1.0,), double_depths=(1,))
        boxes = bowen_boxes(structure, 0.1, 20.0)
        rng = np.random.default_rng(0)
        draws = rng.uniform(-1, 1, (500, boxes.inner.size)) * boxes.inner
        assert _accept_continuous(draws, layout_of(structure), 0.1, 20.0, "roots", 512).all()
        assert np.all(boxes.inner <= boxes.outer)

    @pytest.mark.slow
    def test_random_boxes_nest_the_ball(self):
        structures = [
            _single(2),
            _single(3, 1),
            ChainStructure(depths=(2, 1, 1, 0), alphas=(1.0,), double_depths=(1,)),
            ChainStructure(depths=(2, 2, 1), alphas=(0.5,), double_depths=(2,)),
        ]
        rng = np.random.default_rng(21)
        for _ in range(1000):
            structure = structures[rng.integers(len(structures))]
            epsilon = float(rng.uniform(0.01, 1.0))
            horizon = float(rng.uniform(1.0, 100.0))
            boxes = bowen_boxes(structure, epsilon, horizon)
            layout = layout_of(structure)
            inside = rng.uniform(-1, 1, (20, boxes.inner.size)) * boxes.inner
            assert _accept_continuous(inside, layout, epsilon, horizon, "roots", 512).all()
            wide = rng.uniform(-1, 1, (200, boxes.outer.size)) * 1.5 * boxes.outer
            kept = wide[_accept_continuous(wide, layout, epsilon, horizon, "roots", 512)]
            assert np.all(np.abs(kept) <= boxes.outer * (1 + 1e-9))

    def test_horizon_below_one(self):
        with pytest.raises(InvalidParameterError):
            bowen_boxes(_single(1), 0.1, 0.5)

    @pytest.mark.parametrize(
        "depths,expected",
        [((2,), (3, -3)), ((0,), (1, 0)), ((2, 1, 1, 0), (8, -5))],
    )
    def test_predicted_exponents(self, depths, expected):
        assert predicted_exponents(_single(*depths)) == expected


class TestFits:
    """Least-squares slopes."""

    def test_exact_line(self):
        fit = fit_slope([1, 2, 3, 4], [3, 5, 7, 9])
        assert fit.exponent == pytest.approx(2.0)
        assert fit.intercept == pytest.approx(1.0)
        assert fit.rms_residual == pytest.approx(0.0, abs=1e-12)

    def test_loglog(self):
        xs = [10.0, 20.0, 40.0, 80.0]
        assert fit_loglog(xs, [x**-3 for x in xs]).exponent == pytest.approx(-3.0)

    def test_degenerate(self):
        with pytest.raises(DegenerateFitError):
            fit_slope([1, 2], [1, 2])
        with pytest.raises(DegenerateFitError):
            fit_slope([1, 1, 1], [1, 2, 3])
        with pytest.raises(DegenerateFitError):
            fit_loglog([1, 2, 3], [0, 1, 2])


class TestMonteCarlo:
    """Bowen-ball volume slopes."""

    def test_reproducible_across_threads(self):
        structure = _single(1)
        one = mc_bowen_volume(structure, McConfig(samples=4000, chunk_size=512, seed=9, threads=1))
        four = mc_bowen_volume(structure, McConfig(samples=4000, chunk_size=512, seed=9, threads=4))
        assert [r.accepted for r in one.rows] == [r.accepted for r in four.rows]

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [1, 2, 3])
    @pytest.mark.parametrize(
        "structure,target",
        [
            (ChainStructure(depths=(2,)), -3.0),
            (ChainStructure(depths=(2, 1, 1, 0)), -5.0),
            (ChainStructure(depths=(1, 1), alphas=(1.0,), double_depths=(1,)), -2.0),
        ],
    )
    def test_slope(self, structure, target, seed):
        report = mc_bowen_volume(structure, McConfig(samples=100_000, seed=seed))
        assert report.fit.exponent == pytest.approx(target, abs=0.3)
        assert report.predicted_exponent == target

    def test_zero_structure_is_flat(self):
        report = mc_bowen_volume(_single(0), McConfig(samples=2000, seed=1))
        assert report.predicted_exponent == 0.0
        assert all(r.accepted == r.samples for r in report.rows)
        assert report.fit.exponent == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.slow
    @pytest.mark.parametrize("depths", [(1,), (2,), (1, 0)])
    def test_volume_scales_with_epsilon(self, depths):
        structure = _single(*depths)
        small = mc_bowen_volume(structure, McConfig(epsilon=0.05, samples=20_000, seed=5))
        large = mc_bowen_volume(structure, McConfig(epsilon=0.2, samples=20_000, seed=5))
        dim = structure.dimension
        for a, b in zip(small.rows, large.rows):
            assert b.volume / a.volume == pytest.approx(4.0**dim, rel=1e-2)

    def test_fit_start(self):
        cfg = SequenceConfig(seed=0)
        assert sequence_fit_start(_single(2), cfg) == 3
        assert sequence_fit_start(_single(0), cfg) == 1

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [1, 2, 3])
    @pytest.mark.parametrize("lam", [2.0, math.e])
    @pytest.mark.parametrize("depths,rate", [((1,), 1), ((2,), 3), ((1, 1), 2)])
    def test_sequence_slope(self, depths, rate, lam, seed):
        cfg = SequenceConfig(lam=lam, samples=100_000, seed=seed)
        report = mc_sequence_bowen_volume(_single(*depths), cfg)
        predicted = -rate * math.log(lam)
        assert report.predicted_exponent == pytest.approx(predicted)
        assert report.fit.exponent == pytest.approx(predicted, rel=0.1)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_sequence_slope_deep_chain(self, seed):
        report = mc_sequence_bowen_volume(_single(3), SequenceConfig(lam=math.e, samples=100_000, seed=seed))
        assert report.fit.exponent == pytest.approx(-6.0, rel=0.1)

    @pytest.mark.parametrize("lam", [2.0, math.e])
    def test_sequence_zero_structure(self, lam):
        report = mc_sequence_bowen_volume(_single(0), SequenceConfig(lam=lam, samples=2000, seed=1))
        assert report.predicted_exponent == 0.0
        assert report.fit.exponent == pytest.approx(0.0, abs=0.05)


class TestShearing:
    """Time spent near the origin before leaving the eta-ball."""

    def test_visit_constant(self):
        assert visit_constant(4) == pytest.approx(1 / 6400)
        assert 4 * visit_constant(4) ** 0.5 == pytest.approx(0.05)

    def test_never_close(self):
        eta = 0.1
        x0 = DivergenceState(chains=(np.array([0.0, eta / 10]),))
        exit_time, fraction = shearing_visit_fraction(_single(1), x0, 1e-3, eta)
        assert exit_time == pytest.approx(math.sqrt(99))
        assert fraction == 0.0

    def test_centralizer_displacement(self):
        x0 = DivergenceState(chains=(np.array([0.05, 0.0]),))
        with pytest.raises(NoSeparationError):
            shearing_visit_fraction(_single(1), x0, 1e-3, 0.1)

    def test_bad_constant(self):
        x0 = DivergenceState(chains=(np.array([0.0, 0.01]),))
        with pytest.raises(InvalidParameterError):
            shearing_visit_fraction(_single(1), x0, 0.1, 0.1)

    def test_random_trials_below_remez(self):
        structure = _single(2)
        summary = shearing_trials(structure, 200, visit_constant(4), 0.1, seed=4)
        assert summary.degree == 4
        assert summary.max_fraction <= summary.remez_bound + 1e-6
        assert summary.max_fraction < 0.1

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [4, 5])
    def test_many_random_displacements(self, seed):
        summary = shearing_trials(_single(2), 1000, visit_constant(4), 0.1, seed=seed)
        assert summary.trials == 1000
        assert summary.max_fraction < 0.1
