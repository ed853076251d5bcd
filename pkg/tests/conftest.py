import random

import pytest

from kisinlab import gf


@pytest.fixture(scope="session")
def f5():
    return gf(5, 1)


@pytest.fixture(scope="session")
def f9():
    return gf(3, 2)


@pytest.fixture(scope="session")
def f13():
    return gf(13, 1)


@pytest.fixture
def rng():
    return random.Random(12345)
