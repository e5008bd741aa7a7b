import numpy as np
import pytest

from slicecheck.grassmann import SearchConfig
from slicecheck.quadrature import QuadratureSpec


@pytest.fixture
def spec():
    """Default production spec."""
    return QuadratureSpec()


@pytest.fixture
def fast_spec():
    """Cheap spec for tests that only need coarse values."""
    return QuadratureSpec(sphere_nodes=512, radial_nodes=24)


@pytest.fixture
def search():
    """Small but adequate search budget for the test bodies."""
    return SearchConfig(restarts=6, evals=80, seed=7)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=20240521))
