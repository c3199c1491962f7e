import pytest

from dx3 import Params


@pytest.fixture
def unit():
    return Params()


@pytest.fixture
def pos():
    return Params(lam=0.2)


@pytest.fixture
def neg():
    return Params(lam=-0.2)
