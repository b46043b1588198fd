"""
Shared pytest fixtures for the cvwitness test suite.
"""

import pytest

from cvwitness.logger import WitnessLogger
from cvwitness.metrics import reset_metrics
from cvwitness.states import (
    make_split_fock,
    make_split_lossy_phssv,
    make_split_squeezed_vacuum,
    make_tmsv,
    make_vacuum,
)
from cvwitness.witness import DEFAULT_PAIR

WITNESS_ENV = (
    "WITNESS_SEED",
    "WITNESS_WORKERS",
    "WITNESS_CHUNK_SIZE",
    "WITNESS_FOCK_CUTOFF",
    "WITNESS_METRICS_FILE",
    "WITNESS_LOG_LEVEL",
    "WITNESS_LOG_FORMAT",
)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Run every test without WITNESS_* variables and with fresh metrics."""
    for name in WITNESS_ENV:
        monkeypatch.delenv(name, raising=False)
    reset_metrics()
    yield
    reset_metrics()


@pytest.fixture
def clean_logger():
    """Rebuild loggers from the current environment, and again after the test."""
    WitnessLogger.reset()
    yield
    WitnessLogger.reset()


@pytest.fixture
def default_pair():
    return DEFAULT_PAIR


@pytest.fixture
def vacuum():
    return make_vacuum(2)


@pytest.fixture
def tmsv():
    return make_tmsv(0.5)


@pytest.fixture
def split_sqv():
    return make_split_squeezed_vacuum(0.5)


@pytest.fixture
def split_photon():
    """Ring-approximated |1⟩ split on a balanced beamsplitter."""
    return make_split_fock(1, 0.05)


@pytest.fixture
def split_phssv():
    return make_split_lossy_phssv(1.0, 1.0)
