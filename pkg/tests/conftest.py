# zaremba-spectra - Test Configuration and Fixtures
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>

"""
conftest.py for the zaremba-spectra test suite.
Provides shared fixtures and configuration for all tests.
"""

import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# keep test logs out of the working tree
os.environ.setdefault("ZS_LOG_DIR", os.path.join(tempfile.gettempdir(), "zaremba-test-logs"))


@pytest.fixture(scope="session")
def project_root_path():
    """Return the project root path."""
    return project_root


@pytest.fixture
def temp_logs_dir(tmp_path):
    """Create a temporary logs directory for testing."""
    logs_dir = tmp_path / "logs"
    logs_dir.mkdir()
    return logs_dir


@pytest.fixture
def rng():
    """Seeded generator so every randomized test is reproducible."""
    return np.random.default_rng(20250101)


@pytest.fixture(scope="session")
def quad():
    from spectral.disk_spectrum import gauss_legendre

    return gauss_legendre(200)


@pytest.fixture(scope="session")
def unit_model():
    """vartheta = 1, d = 0, rho = 0: the classical Robin disk."""
    from spectral.disk_spectrum import DiskModel

    return DiskModel()


@pytest.fixture(scope="session")
def disk_family(quad):
    """Unperturbed family, |k| <= 2 with 6 eigenpairs each (dim 30)."""
    from spectral.disk_spectrum import DiskModel
    from spectral.family import assemble_disk_family

    return assemble_disk_family(DiskModel(), 2, 6, quad=quad)


@pytest.fixture(autouse=True)
def clean_threads_env(monkeypatch):
    """ZS_THREADS from the developer shell must not leak into tests."""
    monkeypatch.delenv("ZS_THREADS", raising=False)
    yield


@pytest.fixture(autouse=True)
def isolated_settings_path(monkeypatch, tmp_path):
    """A zaremba.json in the working directory must not leak into tests."""
    monkeypatch.setattr("cli.settings.SETTINGS_PATH", str(tmp_path / "zaremba.json"))
    yield


# Test markers for different test categories
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: Integration tests")
    config.addinivalue_line("markers", "slow: Slow running tests")
    config.addinivalue_line("markers", "acceptance: End-to-end property checks")
