"""Shared test factories and independent numerical oracles.

The oracles deliberately avoid the code paths under test: characteristic
polynomial roots instead of eigh, explicit kron chains instead of the
embedding helper, and per-eigenvalue probability sums instead of vector
moments.
"""
import numpy as np


def rng(seed=0):
    return np.random.default_rng(seed)


def random_hermitian(gen, dim, scale=1.0):
    z = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
    return scale * (z + z.conj().T) / 2


def random_unitary(gen, dim):
    z = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_state_vector(gen, dim):
    z = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return z / np.linalg.norm(z)


def charpoly_coefficients(a):
    """Faddeev-LeVerrier recursion; returns [1, c1, ..., cn] for det(xI - A)."""
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def charpoly_eigenvalues(a):
    """Eigenvalues as roots of the characteristic polynomial, ascending."""
    roots = np.roots(charpoly_coefficients(a))
    return np.sort(roots.real)


def moments_by_eigensystem(amplitudes, a):
    """Expectation and variance from the spectral decomposition of ``a``."""
    w, v = np.linalg.eigh(a)
    probs = np.abs(v.conj().T @ amplitudes) ** 2
    mean = float(np.sum(probs * w))
    var = float(np.sum(probs * (w - mean) ** 2))
    return mean, var


def kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out
