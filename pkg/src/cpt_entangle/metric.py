"""Finite-dimensional inner-product spaces with a Hermitian positive-definite metric.

``inner(space, psi, phi) = psi^H M phi``.  The identity metric is ordinary
(Dirac) quantum mechanics; a PT qubit's CPT inner product is the metric built
in :mod:`cpt_entangle.ptqubit`.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BasisNotOrthonormal, DimMismatch, NonPositiveMetric, NotHermitian, ZeroVector
from .linalg import (
    HERMITIAN_TOL,
    as_matrix,
    as_vector,
    dagger,
    eig_hermitian,
    hermiticity_residual,
    maxabs,
    tensor_product,
)

POSITIVITY_TOL = 1e-10
ZERO_NORM = 1e-14


@dataclass(frozen=True, eq=False)
class MetricSpace:
    metric: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.metric)
        if m.shape[0] != m.shape[1]:
            raise DimMismatch(f"metric must be square, got {m.shape}")
        res = hermiticity_residual(m)
        if res > HERMITIAN_TOL:
            raise NotHermitian(f"metric is not Hermitian (residual {res:.3e})")
        m = 0.5 * (m + dagger(m))
        m.setflags(write=False)
        object.__setattr__(self, "metric", m)
        if self.eigenvalues[0] <= POSITIVITY_TOL:
            raise NonPositiveMetric(f"metric eigenvalue {self.eigenvalues[0]:.3e} is not positive")

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim, dtype=np.complex128))

    @property
    def dim(self):
        return self.metric.shape[0]

    @cached_property
    def is_identity(self):
        return bool(np.array_equal(self.metric, np.eye(self.dim)))

    @cached_property
    def _eig(self):
        return eig_hermitian(self.metric)

    @property
    def eigenvalues(self):
        return self._eig.eigenvalues

    @cached_property
    def sqrt_metric(self):
        """M^{1/2}, the whitening map."""
        if self.is_identity:
            return np.eye(self.dim, dtype=np.complex128)
        w, v = self._eig
        s = (v * np.sqrt(w)) @ dagger(v)
        return 0.5 * (s + dagger(s))

    @cached_property
    def inv_sqrt_metric(self):
        if self.is_identity:
            return np.eye(self.dim, dtype=np.complex128)
        w, v = self._eig
        s = (v / np.sqrt(w)) @ dagger(v)
        return 0.5 * (s + dagger(s))

    def __repr__(self):
        return f"MetricSpace(dim={self.dim}, identity={self.is_identity})"


def _check(space, *vectors):
    out = []
    for v in vectors:
        v = as_vector(v)
        if v.shape[0] != space.dim:
            raise DimMismatch(f"vector of length {v.shape[0]} in a {space.dim}-dim space")
        out.append(v)
    return out


def inner(space, psi, phi):
    psi, phi = _check(space, psi, phi)
    if space.is_identity:
        return complex(np.vdot(psi, phi))
    return complex(np.conj(psi) @ space.metric @ phi)


def norm(space, psi):
    val = inner(space, psi, psi).real
    return float(np.sqrt(max(val, 0.0)))


def fix_phase(psi):
    """Rotate the global phase so the largest-magnitude component is real and >= 0.

    Components within a relative 1e-12 of the maximum count as tied; the
    lowest index wins.
    """
    psi = as_vector(psi)
    mags = np.abs(psi)
    top = mags.max() if psi.size else 0.0
    if top == 0.0:
        return psi.copy()
    k = int(np.flatnonzero(mags >= top * (1.0 - 1e-12))[0])
    return psi * (np.conj(psi[k]) / mags[k])


def normalize(space, psi):
    n = norm(space, psi)
    if n < ZERO_NORM:
        raise ZeroVector(f"cannot normalize a vector of norm {n:.3e}")
    return fix_phase(as_vector(psi) / n)


def tensor_space(s1, s2):
    return MetricSpace(tensor_product(s1.metric, s2.metric))


def whiten(space, psi):
    """Map to Dirac geometry: the Dirac norm of the result is the metric norm of ``psi``."""
    (psi,) = _check(space, psi)
    return space.sqrt_metric @ psi


def unwhiten(space, psi):
    (psi,) = _check(space, psi)
    return space.inv_sqrt_metric @ psi


def orthocomplement(space, psi):
    """Unit vector orthogonal to ``psi`` in a two-dimensional metric space."""
    if space.dim != 2:
        raise DimMismatch("orthocomplement is defined for two-dimensional spaces only")
    u = whiten(space, psi)
    if np.linalg.norm(u) < ZERO_NORM:
        raise ZeroVector("orthocomplement of the zero vector")
    w = np.array([-np.conj(u[1]), np.conj(u[0])])
    return normalize(space, unwhiten(space, w))


def measurement_probability(space, psi, basis, tol=1e-10):
    """Outcome probabilities |<psi_n|psi>|^2 / (||psi||^2 ||psi_n||^2).

    ``basis`` must be metric-orthonormal to ``tol``.
    """
    basis = _check(space, *basis)
    gram = np.array([[inner(space, a, b) for b in basis] for a in basis])
    dev = maxabs(gram - np.eye(len(basis)))
    if dev > tol:
        raise BasisNotOrthonormal(f"basis Gram matrix deviates from identity by {dev:.3e}")
    n2 = norm(space, psi) ** 2
    if n2 < ZERO_NORM**2:
        raise ZeroVector("probabilities of the zero vector")
    return np.array([abs(inner(space, b, psi)) ** 2 / (n2 * gram[i, i].real) for i, b in enumerate(basis)])


def metric_adjoint_residual(space, op):
    op = as_matrix(op)
    if op.shape != (space.dim, space.dim):
        raise DimMismatch(f"operator shape {op.shape} in a {space.dim}-dim space")
    return maxabs(dagger(op) @ space.metric - space.metric @ op)


def is_metric_observable(space, op, tol=1e-10):
    """True when ``op`` is self-adjoint for the metric: op^H M = M op."""
    return metric_adjoint_residual(space, op) <= tol


def is_transpose_observable(space, op, cpt_map, tol=1e-10):
    """True when op^T = K op K, with ``cpt_map`` the matrix K."""
    op = as_matrix(op)
    k = as_matrix(cpt_map)
    if op.shape != (space.dim, space.dim) or k.shape != op.shape:
        raise DimMismatch("operator, CPT map and space dimensions disagree")
    return maxabs(op.T - k @ op @ k) <= tol
