import numpy as np
import pytest

from ritzbounds import SymmetricMatrix, jacobi_eigh, qr_orthonormalize


def random_symmetric(rng, n, scale=1.0):
    m = rng.standard_normal((n, n)) * scale
    return SymmetricMatrix(0.5 * (m + m.T))


def random_basis(rng, n, s):
    return qr_orthonormalize(rng.standard_normal((n, s)))


def midpoint_shift(decomp, i):
    w = decomp.eigenvalues
    return 0.5 * (w[i] + w[i + 1])


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
