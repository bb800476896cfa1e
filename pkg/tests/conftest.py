import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from certcap.channel import (binary_symmetric, hovering_stream, noiseless,
                             resolving_stream, typewriter)
from certcap.linalg import as_matrix
from certcap.plant import Plant

DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def pentagon():
    return typewriter(5)


@pytest.fixture(scope="session")
def bsc14():
    return binary_symmetric(Fraction(1, 4))


@pytest.fixture(scope="session")
def bsc110():
    return binary_symmetric(Fraction(1, 10))


@pytest.fixture(scope="session")
def nl2():
    return noiseless(2)


@pytest.fixture(scope="session")
def hover_channel(nl2):
    return hovering_stream(nl2, [(0, 1)])


@pytest.fixture(scope="session")
def pentagon_stream(pentagon):
    return resolving_stream(pentagon, 3)


def scalar_plant(a, b=None, disturbance=None):
    return Plant(as_matrix([[Fraction(a)]]), c=as_matrix([[Fraction(1)]]),
                 b=as_matrix([[Fraction(b)]]) if b is not None else None,
                 disturbance_bound=Fraction(disturbance) if disturbance is not None else None)


def diagonal_plant(values, disturbance=None):
    n = len(values)
    a = [[Fraction(values[i]) if i == j else Fraction(0) for j in range(n)]
         for i in range(n)]
    c = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    b = [[Fraction(1)] if i == 0 else [Fraction(0)] for i in range(n)]
    return Plant(as_matrix(a), c=as_matrix(c), b=as_matrix(b),
                 disturbance_bound=Fraction(disturbance) if disturbance is not None else None)
