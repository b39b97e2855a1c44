import pytest

from nlcs import NonlinearitySpec

ETAS = (0.0, 0.1, 0.2, 0.3)


@pytest.fixture
def identity():
    return NonlinearitySpec.identity()


@pytest.fixture
def ion02():
    return NonlinearitySpec.trapped_ion(0.2)
