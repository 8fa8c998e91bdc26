import numpy as np
import pytest

from qcontrol.linalg import standard_gates


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def gates():
    return standard_gates()
