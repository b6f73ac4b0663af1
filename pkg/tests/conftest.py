import numpy as np
import pytest

from crossframes.crossframe import CrossFramePair

S3 = np.sqrt(3) / 2
MERCEDES = np.array([[1.0, 0.0], [-0.5, S3], [-0.5, -S3]])


@pytest.fixture
def mercedes():
    return MERCEDES.copy()


@pytest.fixture
def mercedes_pair():
    return CrossFramePair.from_arrays(MERCEDES, 2 / 3 * MERCEDES)


@pytest.fixture
def ortho_pair():
    return CrossFramePair.from_arrays(np.eye(2), np.eye(2))


@pytest.fixture
def duplicated_pair():
    x = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    y = np.array([[0.5, 0.0], [0.5, 0.0], [0.0, 1.0]])
    return CrossFramePair.from_arrays(x, y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
