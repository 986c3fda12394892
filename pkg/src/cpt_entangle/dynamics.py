"""Entanglement generation by product PT-symmetric Hamiltonians.

A symmetric PT qubit Hamiltonian splits as r cos(theta) I + (omega/2) sigma.n
with a complex Bloch vector n = (2/omega)(s, 0, i r sin(theta)) and
omega = 2 s cos(alpha); n.n = 1 (no conjugation) in the unbroken phase.
For H1 (x) H2 only the (omega omega'/4) sigma.n (x) sigma.n' term entangles.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entanglement import schmidt, shannon_bits
from .errors import DimMismatch, NumericalError, UnsupportedAsymmetric
from .linalg import as_matrix, as_vector, expm, maxabs
from .metric import norm, tensor_space
from .ptqubit import PARITY, spectrum

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
I2 = np.eye(2, dtype=np.complex128)


def sigma_dot(n):
    return sum(c * p for c, p in zip(n, PAULI))


class BlochDecomposition(NamedTuple):
    scalar: float
    omega: float
    n: np.ndarray

    def matrix(self):
        return self.scalar * I2 + 0.5 * self.omega * sigma_dot(self.n)


def bloch_decompose(params):
    if not params.symmetric:
        raise UnsupportedAsymmetric("Bloch form needs s == t")
    alpha, _ = spectrum(params)
    omega = 2.0 * params.s * math.cos(alpha)
    n = (2.0 / omega) * np.array([params.s, 0.0, 1j * params.r * math.sin(params.theta)])
    bd = BlochDecomposition(params.r * math.cos(params.theta), omega, n)
    scale = max(1.0, maxabs(params.hamiltonian()))
    if maxabs(bd.matrix() - params.hamiltonian()) > 1e-12 * scale or abs(n @ n - 1) > 1e-10:
        raise NumericalError("Bloch decomposition failed its reconstruction check")
    return bd


@dataclass(frozen=True, eq=False)
class ProductHamiltonian:
    factors: tuple
    matrix: np.ndarray
    nonlocal_part: np.ndarray
    blochs: tuple

    @property
    def coupling(self):
        """omega omega' / 4."""
        return 0.25 * self.blochs[0].omega * self.blochs[1].omega

    def local_terms(self):
        b1, b2 = self.blochs
        s1, s2 = sigma_dot(b1.n), sigma_dot(b2.n)
        return (
            b1.scalar * b2.scalar * np.kron(I2, I2),
            b1.scalar * 0.5 * b2.omega * np.kron(I2, s2),
            b2.scalar * 0.5 * b1.omega * np.kron(s1, I2),
        )

    @property
    def spaces(self):
        return tuple(f.space for f in self.factors)


def pt_commutator_residual(h):
    """Residual of [H, PT (x) PT] as antilinear maps: H (P(x)P) - (P(x)P) conj(H)."""
    pp = np.kron(PARITY, PARITY)
    return maxabs(h @ pp - pp @ np.conj(h))


def product_hamiltonian(sys1, sys2):
    b1, b2 = bloch_decompose(sys1.params), bloch_decompose(sys2.params)
    matrix = np.kron(sys1.hamiltonian, sys2.hamiltonian)
    nonlocal_part = 0.25 * b1.omega * b2.omega * np.kron(sigma_dot(b1.n), sigma_dot(b2.n))
    ph = ProductHamiltonian((sys1, sys2), matrix, nonlocal_part, (b1, b2))
    if pt_commutator_residual(matrix) > 1e-12 * max(1.0, maxabs(matrix)):
        raise NumericalError("product Hamiltonian does not commute with PT (x) PT")
    return ph


def entangling_unitary(ph, t):
    """cos(g t) I - i sin(g t) sigma.n (x) sigma.n' with g = omega omega'/4."""
    b1, b2 = ph.blochs
    g = ph.coupling
    gen = np.kron(sigma_dot(b1.n), sigma_dot(b2.n))
    return math.cos(g * t) * np.eye(4, dtype=np.complex128) - 1j * math.sin(g * t) * gen


def closed_form_amplitudes(p1, p2, t):
    """Amplitudes of U(t)|00> in the computational basis (|00>, |01>, |10>, |11>)."""
    b1, b2 = bloch_decompose(p1), bloch_decompose(p2)
    ww = b1.omega * b2.omega
    c, s = math.cos(0.25 * ww * t), math.sin(0.25 * ww * t)
    k = 4.0 / ww
    st1, st2 = math.sin(p1.theta), math.sin(p2.theta)
    return (
        complex(c, s * k * p1.r * p2.r * st1 * st2),
        complex(k * s * p2.s * p1.r * st1, 0.0),
        complex(k * s * p1.s * p2.r * st2, 0.0),
        complex(0.0, -k * p1.s * p2.s * s),
    )


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    times: np.ndarray
    states: np.ndarray
    entropies: np.ndarray
    schmidt_lambdas: np.ndarray


def evolve(h, psi0, times, s1, s2):
    """Exact evolution exp(-iHt) psi0 sampled at ``times``.

    Raw states are kept as computed; entropies and the larger Schmidt weight
    are evaluated after normalizing each state in the joint CPT metric.
    """
    h = as_matrix(h)
    psi0 = as_vector(psi0)
    if h.shape != (psi0.shape[0], psi0.shape[0]) or psi0.shape[0] != s1.dim * s2.dim:
        raise DimMismatch("Hamiltonian, state and factor spaces disagree")
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be non-decreasing")
    joint = tensor_space(s1, s2)
    states, ents, lams = [], [], []
    for t in times:
        psi = expm(-1j * t * h) @ psi0
        states.append(psi)
        sf = schmidt(psi / norm(joint, psi), s1, s2)
        w = sf.weights
        lams.append(w[0])
        ents.append(shannon_bits(w))
    return EvolutionResult(times, np.array(states), np.array(ents), np.array(lams))
