"""Shared fixtures for the pmc test suite."""

import numpy as np
import pytest

from core.config import get_settings
from geometry.prescribed import constant, parse_prescription


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test sees settings built from its own environment."""
    for var in ("PMC_THREADS", "PMC_DEBUG", "PMC_DEFAULT_STEP", "PMC_DIGITS"):
        monkeypatch.delenv(var, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def H_one():
    return constant(1.0)


@pytest.fixture
def H_zero():
    return constant(0.0)


@pytest.fixture
def soliton():
    return parse_prescription('{"type": "linear"}')
