import numpy as np
import pytest

from hodgekit.corpus import random_bandlimited
from hodgekit.grid import GridSpec, lp_norm


def rel(a, b):
    """||a - b||_2 / ||b||_2 for grid forms."""
    den = lp_norm(b, 2)
    return lp_norm(a - b, 2) / den if den else lp_norm(a, 2)


def spectral_rel(A, B):
    num = sum(np.sum(np.abs(A.components[i] - B.components[i]) ** 2) for i in A.components)
    den = sum(np.sum(np.abs(b) ** 2) for b in B.components.values())
    return float(np.sqrt(num / den)) if den else float(np.sqrt(num))


@pytest.fixture
def spec2():
    return GridSpec(2, 64)


def cases(n_max=3, N=32):
    """(spec, k) pairs for n <= n_max, all k."""
    return [(GridSpec(n, N), k) for n in range(1, n_max + 1) for k in range(n + 1)]


def form(spec, k, seed=0):
    return random_bandlimited(spec, k, seed)
