"""
Shared fixtures for the ss-optics test suite
"""

import logging

import pytest
from click.testing import CliRunner

from ss_optics.app.config import Settings, get_settings
from ss_optics.services.linear_ss import (
    bilayer_ss_exact,
    bilayer_threshold_eta1,
    bilayer_threshold_general,
)


@pytest.fixture
def settings():
    """Fresh settings built from defaults and the environment"""
    return Settings()


@pytest.fixture(autouse=True)
def clear_settings_cache():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def reset_logging():
    """CLI invocations install handlers on captured streams; drop them afterwards"""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)


@pytest.fixture(scope="session")
def eta3_guess():
    return bilayer_threshold_general(3.0, 3000, 1000.0)


@pytest.fixture(scope="session")
def eta3_root(eta3_guess):
    """Exact root nearest 1 um for eta = 3 and a = 1 mm"""
    return bilayer_ss_exact(3.0, 1000.0, eta3_guess)


@pytest.fixture(scope="session")
def eta1_guess():
    return bilayer_threshold_eta1(1000, 1000.0)


@pytest.fixture(scope="session")
def eta1_root(eta1_guess):
    return bilayer_ss_exact(1.0, 1000.0, eta1_guess)


@pytest.fixture(scope="session")
def moderate_root():
    """m = 20 root for eta = 3: K0 ~ 42, small enough for fixed-step integration"""
    return bilayer_ss_exact(3.0, 1000.0, bilayer_threshold_general(3.0, 20, 1000.0))
