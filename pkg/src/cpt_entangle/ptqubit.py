"""Two-level PT-symmetric systems.

The Hamiltonian family is

    H = [[r e^{i theta}, s], [t, r e^{-i theta}]]

with real spectrum when s t > r^2 sin^2(theta).  For s = t the conjugation
operator C and the CPT inner product have closed forms, and the CPT map
psi -> C P conj(psi) is linearized into the metric M = (C P)^T so that
``conj(psi) @ M @ phi == (C P conj(psi)) @ phi``.

Eigenstate and C prefactors are 1/sqrt(2 cos a) and 1/cos a; these are the
values for which the eigenstates are CPT-orthonormal and C^2 = I.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import BrokenPTPhase, DimMismatch, DomainError, NonPositiveMetric, NumericalError, UnsupportedAsymmetric
from .linalg import as_vector, maxabs
from .metric import MetricSpace, inner, metric_adjoint_residual

UNBROKEN_MARGIN = 1e-9
PARITY = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


@dataclass(frozen=True)
class PTParams:
    r: float
    s: float
    t: float
    theta: float

    def __post_init__(self):
        for name in ("r", "s", "t", "theta"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise DomainError(f"{name} must be finite, got {val}")
            object.__setattr__(self, name, val)

    @property
    def discriminant(self):
        return self.s * self.t - (self.r * math.sin(self.theta)) ** 2

    @property
    def symmetric(self):
        return abs(self.s - self.t) <= 1e-12 * max(1.0, abs(self.s))

    def hamiltonian(self):
        return np.array(
            [
                [self.r * np.exp(1j * self.theta), self.s],
                [self.t, self.r * np.exp(-1j * self.theta)],
            ],
            dtype=np.complex128,
        )


class Spectrum(NamedTuple):
    alpha: float
    energies: tuple


def spectrum(params):
    """(alpha, (E-, E+)) for any unbroken parameter set, symmetric or not."""
    disc = params.discriminant
    if disc <= UNBROKEN_MARGIN:
        raise BrokenPTPhase(
            f"s*t - r^2 sin^2(theta) = {disc:.3e}: spectrum is complex or at the exceptional point"
        )
    root = math.sqrt(disc)
    centre = params.r * math.cos(params.theta)
    sin_a = params.r * math.sin(params.theta) / math.sqrt(params.s * params.t)
    return Spectrum(math.asin(max(-1.0, min(1.0, sin_a))), (centre - root, centre + root))


@dataclass(frozen=True, eq=False)
class PTQubitSystem:
    params: PTParams
    alpha: float
    energies: tuple
    hamiltonian: np.ndarray
    psi_plus: Optional[np.ndarray] = None
    psi_minus: Optional[np.ndarray] = None
    C: Optional[np.ndarray] = None
    P: Optional[np.ndarray] = None
    space: Optional[MetricSpace] = None

    @property
    def metric(self):
        return None if self.space is None else self.space.metric

    @property
    def eigenbasis(self):
        return (self.psi_plus, self.psi_minus)


def conjugation_operator(alpha):
    sa, ca = math.sin(alpha), math.cos(alpha)
    return np.array([[1j * sa, 1.0], [1.0, -1j * sa]], dtype=np.complex128) / ca


def cpt_metric(C, P=PARITY):
    """Metric M with psi^H M phi = (C P conj(psi)) . phi."""
    return (C @ P).T


def build(params, *, spectrum_only=False):
    """Construct the PT qubit for ``params``.

    With ``spectrum_only=True`` asymmetric (s != t) parameters are accepted
    and only the spectrum and Hamiltonian are filled in.
    """
    alpha, energies = spectrum(params)
    h = params.hamiltonian()
    if spectrum_only:
        return PTQubitSystem(params, alpha, energies, h)
    if not params.symmetric:
        raise UnsupportedAsymmetric("the closed-form C operator needs s == t")
    if params.s <= 0:
        raise DomainError("s must be positive")
    sin_a = params.r * math.sin(params.theta) / params.s
    if abs(sin_a) >= 1 - UNBROKEN_MARGIN:
        raise NonPositiveMetric(f"|sin(alpha)| = {abs(sin_a):.12f} degenerates the CPT metric")

    ca = math.cos(alpha)
    pref = 1.0 / math.sqrt(2.0 * ca)
    ep, em = np.exp(0.5j * alpha), np.exp(-0.5j * alpha)
    psi_plus = pref * np.array([ep, em])
    psi_minus = pref * np.array([em, -ep])
    C = conjugation_operator(alpha)
    P = PARITY.copy()
    space = MetricSpace(cpt_metric(C, P))
    system = PTQubitSystem(params, alpha, energies, h, psi_plus, psi_minus, C, P, space)

    report = verify_algebra(system)
    scale = max(1.0, maxabs(h))
    worst = max(report.values())
    if worst > 1e-10 * scale:
        raise NumericalError(f"PT qubit invariants violated at construction: {report}")
    return system


def from_alpha(alpha):
    """Symmetric PT qubit with a prescribed alpha (r = sin alpha, s = t = 1, theta = pi/2)."""
    if not abs(alpha) < math.pi / 2:
        raise DomainError("|alpha| must be below pi/2")
    return build(PTParams(math.sin(alpha), 1.0, 1.0, math.pi / 2))


def cpt_apply(system, psi):
    """The antilinear CPT map: C P conj(psi)."""
    psi = as_vector(psi)
    if psi.shape != (2,):
        raise DimMismatch("PT qubit states are two-dimensional")
    return system.C @ (system.P @ np.conj(psi))


def verify_algebra(system):
    """Max-entry residuals of the defining relations.

    Keys: ``c_squared`` (C^2 - I), ``c_h`` ([C, H]), ``c_pt`` ([C, PT] as
    antilinear maps, i.e. C P - P conj(C)), ``metric_adjoint`` (H^H M - M H),
    ``eigen`` (H psi - E psi) and ``orthonormal`` (CPT Gram matrix - I).
    """
    C, P, H = system.C, system.P, system.hamiltonian
    eye = np.eye(2)
    out = {
        "c_squared": maxabs(C @ C - eye),
        "c_h": maxabs(C @ H - H @ C),
        "c_pt": maxabs(C @ P - P @ np.conj(C)),
        "metric_adjoint": metric_adjoint_residual(system.space, H),
    }
    em, ep = system.energies
    out["eigen"] = max(
        maxabs(H @ system.psi_plus - ep * system.psi_plus),
        maxabs(H @ system.psi_minus - em * system.psi_minus),
    )
    basis = system.eigenbasis
    gram = np.array([[inner(system.space, a, b) for b in basis] for a in basis])
    out["orthonormal"] = maxabs(gram - eye)
    return out
