import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_herm(rng, n):
    B = crandn(rng, n, n)
    return 0.5 * (B + B.conj().T)


def charpoly(H):
    """Characteristic polynomial coefficients by Faddeev-LeVerrier (highest degree first)."""
    n = H.shape[0]
    c = [1.0 + 0j]
    M = np.zeros_like(H)
    I = np.eye(n)
    for k in range(1, n + 1):
        M = H @ M + c[-1] * I
        c.append(-np.trace(H @ M) / k)
    return np.array(c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
