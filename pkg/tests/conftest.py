import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_symmetric(rng, n, diag_factor=np.sqrt(2.0)):
    """GOE-convention symmetric matrix: off-diag var 1, diag var 2."""
    m = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    m[iu] = rng.normal(size=len(iu[0]))
    m += m.T
    m[np.diag_indices(n)] = rng.normal(size=n) * diag_factor
    return m


def charpoly_roots(a):
    """Eigenvalues as roots of det(A - x I) via Faddeev-LeVerrier.

    Independent of the package's QR/QL path: the coefficients come from
    the trace recursion and the roots from numpy's companion solver.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    m = np.eye(n)
    for k in range(1, n + 1):
        am = a @ m
        c = -np.trace(am) / k
        coeffs[k] = c
        m = am + c * np.eye(n)
    return np.roots(coeffs)
