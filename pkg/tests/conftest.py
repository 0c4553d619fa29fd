import numpy as np
import pytest

from lauricella.params import ParameterSet, random_generic


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def p1():
    return ParameterSet(complex(0.37, 0.1), [complex(0.21, -0.05)], [complex(0.83, 0.2)])


@pytest.fixture
def p2():
    return ParameterSet(
        complex(0.45, -0.2),
        [complex(0.3, 0.1), complex(-0.6, 0.25)],
        [complex(1.7, -0.3), complex(0.55, 0.4)],
    )


def draws(m, count, seed=0):
    rng = np.random.default_rng(1000 * m + seed)
    return [random_generic(m, rng) for _ in range(count)]
