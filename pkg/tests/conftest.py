"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from gaugecurves import (
    DEFAULT_TOLS,
    EuclideanGauge,
    RandersGauge,
    UnitSpeedHelix,
)


@pytest.fixture
def tols():
    return DEFAULT_TOLS


@pytest.fixture
def euclidean():
    return EuclideanGauge()


@pytest.fixture
def randers_half():
    return RandersGauge(0.5)


@pytest.fixture
def helix_half():
    return UnitSpeedHelix(0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
