import numpy as np
import pytest

from radialpol.rng import make_rng


@pytest.fixture
def rng():
    return make_rng(2718281828)


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(rng):
    e = random_complex(rng, 4)
    return e / np.linalg.norm(e)


def random_rho(rng, rank=4):
    z = random_complex(rng, (4, rank))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real
