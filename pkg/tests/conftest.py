import random

import pytest

from nquasi import Hypercube
from nquasi.constructions import load_fixture


@pytest.fixture(scope="session")
def phi4():
    return load_fixture("phi4")


@pytest.fixture(scope="session")
def psi9():
    return load_fixture("psi9")


@pytest.fixture
def rng():
    return random.Random(12345)


def zk(k, n=2):
    return Hypercube.from_function(k, n, lambda *x: sum(x) % k)


def xor4(n=2):
    def f(*x):
        r = 0
        for v in x:
            r ^= v
        return r
    return Hypercube.from_function(4, n, f)
