import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fdrelay import RngStream, SystemParams

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_hermitian(gen, m, scale=1.0):
    a = gen.standard_normal((m, m)) + 1j * gen.standard_normal((m, m))
    return scale * (a + a.conj().T) / 2


def complex_normal(gen, shape, variance=1.0):
    return np.sqrt(variance / 2) * (gen.standard_normal(shape) + 1j * gen.standard_normal(shape))


@pytest.fixture
def params():
    return SystemParams()


@pytest.fixture
def gen():
    return np.random.default_rng(12345)


@pytest.fixture
def rng():
    return RngStream(2024)
