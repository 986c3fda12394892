"""Entanglement of PT-symmetric qubits under Dirac and CPT inner products."""

__version__ = "0.1.0"

from ._accel import backend
from .dynamics import (
    bloch_decompose,
    closed_form_amplitudes,
    entangling_unitary,
    evolve,
    product_hamiltonian,
)
from .entanglement import (
    DensityMatrix,
    SchmidtForm,
    cross_theory_singlet_entropy,
    entanglement_entropy,
    entropy,
    is_product,
    reduced_density,
    schmidt,
    two_ptqubit_entanglement,
)
from .errors import CPTEntangleError, NumericalError, ValidationError
from .linalg import eig_hermitian, expm, sqrt_hpd, tensor_product
from .metric import MetricSpace, inner, norm, normalize, tensor_space
from .ptqubit import PTParams, PTQubitSystem, build, cpt_apply, from_alpha, verify_algebra
from .rate import gamma, gamma_bound, h_max, h_value, lambda_closed_form, lambda_dot, trajectory
