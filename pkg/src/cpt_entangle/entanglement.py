"""Schmidt decomposition, partial traces and entropies for metric spaces.

Bipartite states are flat vectors of length d1*d2 in row-major order, so
``psi.reshape(d1, d2)[a, i]`` is the amplitude of e_a (x) e_i.  All entropies
are in bits.

Partial traces come in two theories.  ``"dirac"`` traces with the standard
inner product.  ``"cpt"`` traces with the metric of the traced factor, and the
kept factor's ket-bras |a><b| then carry a metric bra as well.  How that bra
is written as a matrix is the ``frame`` choice:

* ``"computational"`` writes <b| as the row conj(M)[b, :].  This is the
  default; for the Dirac singlet it gives a reduced state whose entropy
  falls below one bit as soon as alpha != 0.
* ``"metric"`` writes <b| as M[b, :], the representation consistent with
  ``inner``; its spectrum is always the Schmidt spectrum.

The two frames coincide whenever the kept-side metric is real, in particular
in the Hermitian limit.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimMismatch, DomainError, NotHermitian, NotNormalized, UnphysicalState
from .linalg import as_vector, dagger, eig_hermitian, hermiticity_residual, sqrt_hpd
from .metric import MetricSpace, fix_phase, tensor_space
from .metric import norm as metric_norm
from .ptqubit import from_alpha

CLAMP = 1e-10
THEORIES = ("cpt", "dirac")
FRAMES = ("computational", "metric")


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray
    spaces: tuple

    @property
    def weights(self):
        """Squared coefficients normalized to sum to one."""
        w = self.coefficients**2
        return w / w.sum()

    @property
    def rank(self):
        return len(self.coefficients)

    def reconstruct(self):
        return sum(c * np.kron(a, b) for c, a, b in zip(self.coefficients, self.left, self.right))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A (possibly unnormalized) reduced state.

    ``matrix`` is the operator in the computational basis and equals
    ``kernel @ bra_metric``; ``kernel`` is Hermitian positive semidefinite.
    ``bra_metric`` is None for the plain Dirac representation.
    """

    matrix: np.ndarray
    space: MetricSpace
    kernel: np.ndarray
    bra_metric: Optional[np.ndarray] = None
    trace_normalized: bool = False

    @classmethod
    def from_matrix(cls, matrix, space=None):
        m = np.asarray(matrix, dtype=np.complex128)
        return cls(m, space or MetricSpace.identity(m.shape[0]), m)

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def normalized(self):
        tr = self.trace
        if tr <= 0:
            raise UnphysicalState(f"reduced state has non-positive trace {tr:.3e}")
        return DensityMatrix(self.matrix / tr, self.space, self.kernel / tr, self.bra_metric, True)

    def hermitian_form(self):
        """B^{1/2} K B^{1/2}: Hermitian, and similar to ``matrix``."""
        if self.bra_metric is None:
            return self.kernel
        s = sqrt_hpd(self.bra_metric)
        return s @ self.kernel @ s

    def eigenvalues(self):
        return eig_hermitian(self.hermitian_form(), tol=1e-10).eigenvalues


def shannon_bits(p):
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p))) + 0.0


def _as_bipartite(psi, s1, s2):
    psi = as_vector(psi)
    if psi.shape[0] != s1.dim * s2.dim:
        raise DimMismatch(f"state of length {psi.shape[0]} for factors of dims {s1.dim} x {s2.dim}")
    return psi.reshape(s1.dim, s2.dim)


def schmidt(psi, s1, s2):
    """Schmidt decomposition with metric-orthonormal vectors on each side.

    Both factors are whitened, the amplitude matrix is put through an SVD and
    the singular vectors are mapped back.  Coefficients are descending; each
    left vector has the usual phase convention and its right partner absorbs
    the compensating phase.
    """
    amp = _as_bipartite(psi, s1, s2)
    w = s1.sqrt_metric @ amp @ s2.sqrt_metric.T
    u, sig, vh = np.linalg.svd(w)
    left, right = [], []
    for k in range(len(sig)):
        a = s1.inv_sqrt_metric @ u[:, k]
        b = s2.inv_sqrt_metric @ vh[k, :]
        a_fixed = fix_phase(a)
        phase = np.vdot(a, a_fixed) / np.vdot(a, a)
        left.append(a_fixed)
        right.append(b * np.conj(phase))
    return SchmidtForm(sig, np.array(left), np.array(right), (s1, s2))


def reduced_density(psi, s1, s2, keep=1, theory="cpt", frame="computational"):
    """Reduced state of one factor; unnormalized, with its trace recorded.

    ``kernel[a, b] = sum_ij Psi[a, i] conj(Psi[b, j]) W[j, i]`` where W is the
    traced factor's metric (``theory="cpt"``) or the identity (``"dirac"``).
    """
    if theory not in THEORIES:
        raise DomainError(f"theory must be one of {THEORIES}")
    if frame not in FRAMES:
        raise DomainError(f"frame must be one of {FRAMES}")
    if keep not in (1, 2):
        raise DomainError("keep must be 1 or 2")
    amp = _as_bipartite(psi, s1, s2)
    kept, traced = (s1, s2) if keep == 1 else (s2, s1)
    if keep == 2:
        amp = amp.T
    if theory == "dirac":
        kernel = amp @ amp.conj().T
        kernel = 0.5 * (kernel + dagger(kernel))
        return DensityMatrix(kernel, MetricSpace.identity(kept.dim), kernel)
    kernel = amp @ traced.metric.T @ amp.conj().T
    kernel = 0.5 * (kernel + dagger(kernel))
    if kept.is_identity:
        return DensityMatrix(kernel, kept, kernel)
    bra = np.conj(kept.metric) if frame == "computational" else kept.metric
    return DensityMatrix(kernel @ bra, kept, kernel, bra)


def entropy(rho, base=2):
    """Von Neumann entropy of the trace-normalized state.

    Eigenvalues in [-1e-10, 0) are clamped to zero; anything more negative is
    an :class:`UnphysicalState`.
    """
    res = hermiticity_residual(rho.kernel)
    if res > 1e-10 * max(1.0, np.max(np.abs(rho.kernel))):
        raise NotHermitian(f"density kernel is not Hermitian (residual {res:.3e})")
    lam = rho.normalized().eigenvalues()
    if lam.min() < -CLAMP:
        raise UnphysicalState(f"density matrix has eigenvalue {lam.min():.3e}")
    lam = np.clip(lam, 0.0, None)
    bits = shannon_bits(lam)
    return bits if base == 2 else bits * math.log(2) / math.log(base)


def entanglement_entropy(psi, s1, s2):
    """Entropy of the Schmidt weights (self-consistent metric pipeline)."""
    return shannon_bits(schmidt(psi, s1, s2).weights)


def two_ptqubit_entanglement(a, b, c, d):
    """Closed-form entropy for amplitudes in a CPT-orthonormal product basis.

    lambda_pm = (1 +- sqrt(X)) / 2 with
    X = 1 - 4[(|a|^2+|b|^2)(|c|^2+|d|^2) - |a c* + b d*|^2].
    """
    a, b, c, d = (complex(z) for z in (a, b, c, d))
    total = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
    if abs(total - 1.0) > 1e-10:
        raise NotNormalized(f"amplitudes have squared norm {total:.12f}")
    x = 1.0 - 4.0 * ((abs(a) ** 2 + abs(b) ** 2) * (abs(c) ** 2 + abs(d) ** 2) - abs(a * c.conjugate() + b * d.conjugate()) ** 2)
    root = math.sqrt(max(x, 0.0))
    return shannon_bits([0.5 * (1 + root), 0.5 * (1 - root)])


def is_product(a, b, c, d, tol=1e-10):
    """Separability test |ad - bc| <= tol (the ratio condition a/b = c/d without division)."""
    return abs(complex(a) * complex(d) - complex(b) * complex(c)) <= tol


def dirac_singlet():
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)


def cpt_singlet(sys1, sys2):
    """(psi+ psi-' - psi- psi+') / sqrt(2)."""
    return (np.kron(sys1.psi_plus, sys2.psi_minus) - np.kron(sys1.psi_minus, sys2.psi_plus)) / math.sqrt(2.0)


def eigen_product_state(amplitudes, sys1, sys2):
    """sum of amplitudes over psi+psi+', psi+psi-', psi-psi+', psi-psi-'."""
    amps = as_vector(amplitudes)
    if amps.shape != (4,):
        raise DimMismatch("two-PT-qubit states need four amplitudes")
    b1, b2 = sys1.eigenbasis, sys2.eigenbasis
    return sum(amps[2 * i + j] * np.kron(b1[i], b2[j]) for i in range(2) for j in range(2))


class CrossTheoryResult(NamedTuple):
    closed_form_value: float
    pipeline_value: float


def _check_alpha(alpha):
    if not abs(alpha) < math.pi / 2 - 1e-6:
        raise DomainError("|alpha| must be below pi/2 - 1e-6")


def singlet_entropy_closed_form(alpha):
    """Two-line closed form for the Dirac singlet under CPT: lambda = (1 +- 2 sin a)/2.

    It does not agree with :func:`singlet_entropy_pipeline` away from a = 0
    and is kept for comparison only.

    Raises :class:`UnphysicalState` once |sin a| > 1/2, where a lambda goes negative.
    """
    _check_alpha(alpha)
    two_s = 2.0 * math.sin(alpha)
    lam = np.array([0.5 * (1 + two_s), 0.5 * (1 - two_s)])
    if lam.min() < -CLAMP:
        raise UnphysicalState(f"closed form gives eigenvalue {lam.min():.6f} at alpha={alpha}")
    return shannon_bits(np.clip(lam, 0.0, 1.0))


def singlet_entropy_pipeline(alpha, frame="computational"):
    """Dirac singlet, CPT partial trace on both PT qubits at ``alpha``, trace-normalized entropy."""
    _check_alpha(alpha)
    space = from_alpha(alpha).space
    rho = reduced_density(dirac_singlet(), space, space, keep=1, theory="cpt", frame=frame)
    return entropy(rho)


def cross_theory_singlet_entropy(alpha):
    return CrossTheoryResult(singlet_entropy_closed_form(alpha), singlet_entropy_pipeline(alpha))


def joint_norm(psi, s1, s2):
    return metric_norm(tensor_space(s1, s2), psi)
