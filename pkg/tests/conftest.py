"""Pytest configuration and fixtures."""

import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

from config.settings import get_settings, reload_settings
from slowentropy.algebra_zoo import block_nilpotent, heisenberg_type, principal_nilpotent, sl_basis


@pytest.fixture(scope="session")
def temp_dir():
    """Create temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def test_env_vars(temp_dir: Path, monkeypatch: pytest.MonkeyPatch):
    """Test-environment SLOWENT_* variables."""
    test_env = {
        "SLOWENT_ENV": "testing",
        "SLOWENT_LOG_LEVEL": "DEBUG",
        "SLOWENT_LOG_FILE": str(temp_dir / "test.log"),
        "SLOWENT_MC_SAMPLES": "20000",
        "SLOWENT_THREADS": "2",
    }
    for key, value in test_env.items():
        monkeypatch.setenv(key, value)
    return test_env


@pytest.fixture
def test_settings(test_env_vars):
    """Get test settings with reload."""
    settings = reload_settings()
    yield settings
    # Clear cache after test
    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def _fresh_settings():
    """Drop cached settings so no test sees another test's environment."""
    yield
    get_settings.cache_clear()


@pytest.fixture
def sl2_principal():
    """sl(2) with the nilpotent E_12."""
    return sl_basis(2), principal_nilpotent(2)


@pytest.fixture
def sl3_principal():
    """sl(3) with the principal nilpotent."""
    return sl_basis(3), principal_nilpotent(3)


@pytest.fixture
def sl4_blocks_22():
    """sl(4) with two Jordan blocks of size 2."""
    return sl_basis(4), block_nilpotent([2, 2])


@pytest.fixture
def skew_shift_algebra():
    """Skew-shift algebra over T^3 with rotation 1/2."""
    return heisenberg_type(3, Fraction(1, 2))
