"""
Shared fixtures for the detector test suite.
"""

import math

import numpy as np
import pytest

from shared.detector.tables import build_tables
from shared.models.config import HOME_ENV_VAR, OUTPUT_ENV_VAR
from shared.numerics.rng import RngStream
from shared.radar.scenario import make_scenario, random_noise_cov


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte Carlo acceptance checks (deselect with -m 'not slow')")


@pytest.fixture(autouse=True)
def isolated_home(tmp_path, monkeypatch):
    """Keep the table cache and default outputs inside the test's tmp dir."""
    monkeypatch.setenv(HOME_ENV_VAR, str(tmp_path / "home"))
    monkeypatch.setenv(OUTPUT_ENV_VAR, str(tmp_path / "results"))
    return tmp_path


@pytest.fixture
def stream():
    return RngStream(seed=7)


@pytest.fixture(scope="session")
def colored_sigma():
    """2 x 2 colored noise covariance (alpha = 1)."""
    return random_noise_cov(2, 1.0, RngStream(seed=11))


@pytest.fixture(scope="session")
def colored_scenario(colored_sigma):
    return make_scenario(2, 2, 20, math.pi / 6, math.pi / 6, colored_sigma)


@pytest.fixture(scope="session")
def colored_tables(colored_scenario):
    return build_tables(colored_scenario, tol=1e-6, rng=RngStream(seed=3))


@pytest.fixture(scope="session")
def scalar_scenario():
    """Single-antenna scenario; every orthant is a closed form."""
    return make_scenario(1, 1, 3, math.pi / 6, math.pi / 6, np.array([[3.0]]))


@pytest.fixture(scope="session")
def scalar_tables(scalar_scenario):
    return build_tables(scalar_scenario)
