"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from rmt.ensembles import sample_goe
from rmt.spectral import SpectralData, decompose


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def goe_spectral(rng):
    """Factory: eigendecomposition of a fresh GOE sample of size n."""

    def make(n: int) -> SpectralData:
        return decompose(sample_goe(n, rng))

    return make


@pytest.fixture
def unit_vector(rng):
    def make(n: int) -> np.ndarray:
        v = rng.standard_normal(n)
        return v / np.linalg.norm(v)

    return make
