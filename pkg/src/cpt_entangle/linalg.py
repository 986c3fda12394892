"""Dense complex linear algebra for the small matrices used in this package.

Matrices are ``complex128`` numpy arrays; nothing here is meant for
dimensions much beyond 32.
"""
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DimMismatch, NoConvergence, NotHermitian, NotPositiveDefinite, Overflow

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
EXPM_MAX_SQUARINGS = 40


class HermEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_vector(v):
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise DimMismatch(f"expected a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def _square(a):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def maxabs(a):
    """Largest entry magnitude (0 for empty input)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(a):
    return np.conj(np.transpose(a))


def tensor_product(a, b):
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermiticity_residual(a):
    a = _square(a)
    return maxabs(a - dagger(a))


def eig_hermitian(a, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Eigenvalues come back ascending, eigenvectors as unit columns.
    """
    a = _square(a)
    res = hermiticity_residual(a)
    if res > tol:
        raise NotHermitian(f"||A - A^H||_max = {res:.3e} exceeds {tol:.1e}")
    sym = 0.5 * (a + dagger(a))
    w, v, sweeps = _kernels.jacobi_eigh(sym, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    return HermEig(w, v)


def sqrt_hpd(a, tol=HERMITIAN_TOL):
    """Hermitian positive-definite square root."""
    w, v = eig_hermitian(a, tol=tol)
    if w[0] <= 1e-12:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3e} is not positive")
    s = (v * np.sqrt(w)) @ dagger(v)
    return 0.5 * (s + dagger(s))


def inv_sqrt_hpd(a, tol=HERMITIAN_TOL):
    w, v = eig_hermitian(a, tol=tol)
    if w[0] <= 1e-12:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3e} is not positive")
    s = (v / np.sqrt(w)) @ dagger(v)
    return 0.5 * (s + dagger(s))


def expm(a):
    """Matrix exponential (scaling and squaring, truncated Taylor series)."""
    a = _square(a)
    result, ok = _kernels.expm_taylor(a, EXPM_MAX_SQUARINGS)
    if not ok:
        raise Overflow(f"expm: norm {np.linalg.norm(a, 1):.3e} is too large")
    return result
