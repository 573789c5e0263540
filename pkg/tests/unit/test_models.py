"""Tests for Pydantic models."""

import json

import pytest
from pydantic import ValidationError

from models import (
    AlgebraSpec,
    BlockSequence,
    CentralizerSpectrum,
    ChainStructure,
    CodingConfig,
    EntropyMethod,
    EntropyReport,
    FormulaKind,
    JordanLengths,
    MatrixModel,
    McConfig,
    SequenceConfig,
    SymPowerSpec,
    VolumeRow,
)


class TestStructureModels:
    """Test value types."""

    def test_matrix_model_canonicalizes_rationals(self):
        m = MatrixModel(rows=1, cols=3, entries=[["2/4", " -3 ", "0/5"]])
        assert m.entries == [["1/2", "-3", "0"]]

    def test_matrix_model_shape_mismatch_fails(self):
        with pytest.raises(ValidationError, match="declared shape"):
            MatrixModel(rows=2, cols=2, entries=[["1", "0"]])

    def test_matrix_model_rejects_non_rational(self):
        with pytest.raises(ValidationError, match="not a rational"):
            MatrixModel(rows=1, cols=1, entries=[["pi"]])

    def test_chain_structure_sorted(self):
        s = ChainStructure(depths=(0, 2, 1, 1))
        assert s.depths == (2, 1, 1, 0)
        assert s.dimension == 8
        assert s.chain_depths == (2, 1, 1, 0)

    def test_chain_structure_doubles(self):
        s = ChainStructure(depths=(1, 1, 0, 2, 2), alphas=(0.5, 2.0), double_depths=(1, 2))
        assert s.depths == (2, 2, 1, 1, 0)
        assert s.doubles == ((2, 2.0), (1, 0.5))
        assert s.chain_depths == (0,)

    def test_chain_structure_double_needs_two_slots(self):
        with pytest.raises(ValidationError, match="appear twice"):
            ChainStructure(depths=(1, 0), alphas=(1.0,), double_depths=(1,))

    def test_chain_structure_rejects_bad_values(self):
        with pytest.raises(ValidationError):
            ChainStructure(depths=(-1,))
        with pytest.raises(ValidationError):
            ChainStructure(depths=(1, 1), alphas=(0.0,), double_depths=(1,))
        with pytest.raises(ValidationError):
            ChainStructure(depths=(1, 1), alphas=(1.0, 2.0), double_depths=(1,))

    def test_chain_structure_json_round_trip(self):
        s = ChainStructure(depths=(2, 1, 1), alphas=(1.0,), double_depths=(1,))
        assert ChainStructure.model_validate_json(s.model_dump_json()) == s

    def test_block_sequence_nondecreasing(self):
        assert BlockSequence(k=(1, 1, 2)).dimension == 4
        with pytest.raises(ValidationError, match="nondecreasing"):
            BlockSequence(k=(2, 1))
        with pytest.raises(ValidationError):
            BlockSequence(k=())

    def test_jordan_lengths_positive(self):
        with pytest.raises(ValidationError):
            JordanLengths(lengths=(3, 0))

    def test_sym_power_spec_limits(self):
        assert SymPowerSpec(n=2).kind == "sym"
        with pytest.raises(ValidationError):
            SymPowerSpec(n=13)
        with pytest.raises(ValidationError):
            SymPowerSpec(kind="wedge", n=2)

    def test_centralizer_spectrum_drops_zero_multiplicities(self):
        spec = CentralizerSpectrum(multiplicities={4: 1, 0: 2, 2: 0})
        assert spec.multiplicities == {0: 2, 4: 1}
        assert spec.dimension == 3

    def test_centralizer_spectrum_from_json_keys(self):
        spec = CentralizerSpectrum.model_validate_json('{"multiplicities": {"2": 1}}')
        assert spec.multiplicities == {2: 1}

    def test_algebra_spec_shape_checks(self):
        one = {"rows": 2, "cols": 2, "entries": [["0", "1"], ["0", "0"]]}
        AlgebraSpec(basis=[one], u=one)
        with pytest.raises(ValidationError, match="one square shape"):
            AlgebraSpec(basis=[one, {"rows": 1, "cols": 1, "entries": [["1"]]}])
        with pytest.raises(ValidationError, match="square"):
            AlgebraSpec(basis=[{"rows": 1, "cols": 2, "entries": [["1", "0"]]}])


class TestConfigModels:
    """Test run configurations."""

    def test_mc_config_time_grid(self):
        cfg = McConfig(seed=1, tmin=10, tratio=2, tcount=4)
        assert cfg.t_grid == (10.0, 20.0, 40.0, 80.0)

    def test_mc_config_requires_seed(self):
        with pytest.raises(ValidationError):
            McConfig()

    def test_mc_config_limits(self):
        with pytest.raises(ValidationError):
            McConfig(seed=1, samples=10)
        with pytest.raises(ValidationError):
            McConfig(seed=1, tratio=1.0)
        with pytest.raises(ValidationError):
            McConfig(seed=-1)

    def test_sequence_config_times(self):
        cfg = SequenceConfig(seed=0, base_time=1.5, lam=2.0)
        assert cfg.times(3) == pytest.approx((1.5, 3.0, 6.0, 12.0))
        with pytest.raises(ValidationError):
            SequenceConfig(seed=0, lam=1.0)

    def test_sequence_config_has_no_sup_mode(self):
        assert "sup_mode" not in SequenceConfig.model_fields

    def test_coding_config_defaults(self):
        cfg = CodingConfig(d=2)
        assert 0 < cfg.alpha < 1
        assert cfg.q == 10

    def test_coding_config_alpha_range(self):
        assert CodingConfig(d=2, alpha=0.0, q=2, n=4).alpha == 0.0
        with pytest.raises(ValidationError):
            CodingConfig(d=2, alpha=1.0)
        with pytest.raises(ValidationError):
            CodingConfig(d=2, alpha=-0.1)

    def test_coding_config_cell_overflow(self):
        with pytest.raises(ValidationError, match="64-bit"):
            CodingConfig(d=8, q=300)

    def test_configs_frozen(self):
        cfg = CodingConfig(d=1)
        with pytest.raises(ValidationError):
            cfg.q = 3


class TestReportModels:
    """Test output models."""

    def test_entropy_report_serialization(self):
        report = EntropyReport(R="10/2", method=EntropyMethod.CLOSED_FORM, formula=FormulaKind.TWISTED)
        data = json.loads(report.model_dump_json(exclude_none=True))
        assert data == {"R": "5", "method": "closed-form", "formula": "twisted"}

    def test_volume_row_logs(self):
        row = VolumeRow(t=100.0, volume=1e-3, accepted=5, samples=1000)
        assert row.log10_t == pytest.approx(2.0)
        assert row.log10_volume == pytest.approx(-3.0)

    def test_volume_row_needs_acceptance(self):
        with pytest.raises(ValidationError):
            VolumeRow(t=1.0, volume=1.0, accepted=0, samples=10)
