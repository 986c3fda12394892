"""Entanglement rate and entangling capability of two-PT-qubit Hamiltonians.

For a state sqrt(l) a1 b1 + sqrt(1-l) a2 b2 (metric-orthonormal pairs, l the
larger weight) evolving under a metric-self-adjoint H,

    dl/dt = 2 sqrt(l(1-l)) Im h,    h = <a1 b1| H |a2 b2>_CPT,

and dE/dt = f(l) Im h with f(l) = 2 sqrt(l(1-l)) log2((1-l)/l).  The
capability h_max is the largest |h| over metric-unit a1, b1 (a2, b2 being
their orthocomplements) and is found numerically.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.stats import qmc

from . import _kernels
from ._accel import max_threads
from .dynamics import evolve
from .entanglement import schmidt, shannon_bits
from .errors import DimMismatch, DomainError, NotNormalized, OptimizerBudgetExceeded, RankMismatch
from .linalg import as_matrix
from .metric import fix_phase, norm, orthocomplement


class RateSample(NamedTuple):
    t: float
    lam: float
    entropy: float
    gamma: float
    bound: float
    lambda_closed_form: float


@dataclass(frozen=True, eq=False)
class HMaxResult:
    value: float
    a1: np.ndarray
    b1: np.ndarray
    evaluations: int
    starts: int
    multistart_value: float
    grid_value: float
    grid_coarse_value: float
    converged: bool


def _check_unit(space, v, name):
    n = norm(space, v)
    if abs(n - 1.0) > 1e-10:
        raise NotNormalized(f"{name} has metric norm {n:.12f}, expected 1")


def _joint_inner(s1, s2, x, y):
    return complex(np.conj(x) @ np.kron(s1.metric, s2.metric) @ y)


def h_value(h, a1, b1, s1, s2):
    """<a1 b1| H |a2 b2> in the joint metric; a2, b2 are the orthocomplements."""
    h = as_matrix(h)
    if h.shape != (4, 4) or s1.dim != 2 or s2.dim != 2:
        raise DimMismatch("h is defined for two PT qubits")
    _check_unit(s1, a1, "a1")
    _check_unit(s2, b1, "b1")
    a2 = orthocomplement(s1, a1)
    b2 = orthocomplement(s2, b1)
    return _joint_inner(s1, s2, np.kron(a1, b1), h @ np.kron(a2, b2))


def _schmidt_h(h, sf):
    if sf.rank != 2:
        raise RankMismatch(f"expected a two-term Schmidt form, got {sf.rank}")
    s1, s2 = sf.spaces
    return _joint_inner(s1, s2, np.kron(sf.left[0], sf.right[0]), as_matrix(h) @ np.kron(sf.left[1], sf.right[1]))


def lambda_dot(h, sf):
    """dl/dt = 2 sqrt(l(1-l)) Im h with h taken on the Schmidt vectors of ``sf``."""
    lam = sf.weights[0]
    return 2.0 * math.sqrt(max(lam * (1.0 - lam), 0.0)) * _schmidt_h(h, sf).imag


def f_lambda(lam):
    """2 sqrt(l(1-l)) dE/dl in bits, extended by continuity to 0 at l in {0, 1}."""
    if lam <= 0.0 or lam >= 1.0:
        return 0.0
    return 2.0 * math.sqrt(lam * (1.0 - lam)) * math.log2((1.0 - lam) / lam)


def gamma(h, psi, s1, s2, signed=False):
    """Entanglement rate of ``psi``.

    The default is the magnitude form f(l) |h|.  ``signed=True`` gives
    f(l) Im h, which is dE/dt along the actual trajectory.
    """
    sf = schmidt(psi, s1, s2)
    hv = _schmidt_h(h, sf)
    return f_lambda(sf.weights[0]) * (hv.imag if signed else abs(hv))


def lambda_closed_form(h_max, lam0, t):
    """sin^2(h_max t + phi0) with sin^2(phi0) = lam0."""
    if not 0.0 <= lam0 <= 1.0:
        raise DomainError("lambda0 must lie in [0, 1]")
    phi0 = math.asin(math.sqrt(lam0))
    return math.sin(h_max * t + phi0) ** 2


def gamma_bound(lam, h_max):
    """log2((1-l)/l) h_max; negative for l > 1/2 (compare against its absolute value)."""
    if not 0.0 < lam < 1.0:
        raise DomainError("the rate bound needs 0 < lambda < 1")
    return math.log2((1.0 - lam) / lam) * h_max


def whitened_operator(h, s1, s2):
    s = np.kron(s1.sqrt_metric, s2.sqrt_metric)
    s_inv = np.kron(s1.inv_sqrt_metric, s2.inv_sqrt_metric)
    return s @ as_matrix(h) @ s_inv


def _angles_to_vector(space, theta, phi):
    u, _ = _kernels.qubit_pair(theta, phi)
    v = space.inv_sqrt_metric @ u
    return fix_phase(v / norm(space, v))


def _run_starts(ht, starts, step, tol, max_evals, threads):
    fatol = tol * max(1.0, float(np.max(np.abs(ht))))

    def one(x0):
        x, val, nfev, ok = _kernels.nelder_mead_h(ht, np.asarray(x0, float), step, fatol, 1e-7, max_evals)
        # one restart from the optimum guards against a collapsed simplex
        x2, val2, nfev2, ok2 = _kernels.nelder_mead_h(ht, x, 0.05, fatol, 1e-7, max_evals)
        if val2 >= val:
            return x2, val2, nfev + nfev2, ok2
        return x, val, nfev + nfev2, ok

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(starts))) as pool:
            return list(pool.map(one, starts))
    return [one(x0) for x0 in starts]


def _best(results):
    # deterministic: highest value, lowest index on ties
    best = 0
    for i, r in enumerate(results):
        if r[1] > results[best][1]:
            best = i
    return results[best]


def h_grid(ht, size=24, threads=1):
    """|h| on a size^4 grid of (theta_a, phi_a, theta_b, phi_b); returns (values, axes)."""
    th = np.linspace(0.0, math.pi, size)
    ph = np.linspace(0.0, 2.0 * math.pi, size, endpoint=False)
    if threads > 1:
        chunks = [c for c in np.array_split(th, threads) if c.size]
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda c: _kernels.h_abs_grid(ht, c, ph, th, ph), chunks))
        values = np.concatenate(parts, axis=0)
    else:
        values = _kernels.h_abs_grid(ht, th, ph, th, ph)
    return values, (th, ph, th, ph)


def h_max(h, s1, s2, starts=32, seed=0, tol=1e-10, max_evals=20000, grid=24, polish=4):
    """Entangling capability: max |h| over metric-unit a1, b1.

    Both factors are whitened and each unit vector is written with two
    angles.  Two routes are run: ``starts`` quasi-random Nelder-Mead starts
    (a Halton sequence advanced by ``seed``), and a ``grid``^4 scan whose
    ``polish`` best points are refined by the same local search.  The larger
    of the two is returned; both are kept for cross-checking.
    """
    if s1.dim != 2 or s2.dim != 2:
        raise DimMismatch("h_max is implemented for two PT qubits")
    ht = whitened_operator(h, s1, s2)
    threads = max_threads()

    halton = qmc.Halton(d=4, scramble=False)
    if seed:
        halton.fast_forward(int(seed))
    unit = halton.random(starts)
    x0s = unit * np.array([math.pi, 2 * math.pi, math.pi, 2 * math.pi])
    ms = _run_starts(ht, list(x0s), 0.4, tol, max_evals, threads)
    ms_best = _best(ms)

    values, (th, ph, _, _) = h_grid(ht, grid, threads)
    flat = values.ravel()
    k = min(polish, flat.size)
    top = np.argsort(-flat, kind="stable")[:k]
    gx0 = [np.array([th[i], ph[j], th[m], ph[n]]) for i, j, m, n in zip(*np.unravel_index(top, values.shape))]
    gr = _run_starts(ht, gx0, math.pi / grid, tol, max_evals, threads)
    gr_best = _best(gr)

    evaluations = sum(r[2] for r in ms) + sum(r[2] for r in gr) + flat.size
    x, val, _, ok = ms_best if ms_best[1] >= gr_best[1] else gr_best
    result = HMaxResult(
        value=float(val),
        a1=_angles_to_vector(s1, x[0], x[1]),
        b1=_angles_to_vector(s2, x[2], x[3]),
        evaluations=int(evaluations),
        starts=starts,
        multistart_value=float(ms_best[1]),
        grid_value=float(gr_best[1]),
        grid_coarse_value=float(flat.max()),
        converged=bool(ok),
    )
    if not ok:
        raise OptimizerBudgetExceeded(f"best local search did not converge in {max_evals} evaluations", best=result)
    return result


def _larger(lam):
    return max(lam, 1.0 - lam)


def trajectory(h, psi0, s1, s2, times, h_max_value=None):
    """Per-sample l, E, signed rate, rate bound and the sin^2 closed form.

    ``h_max_value`` defaults to :func:`h_max` of ``h``.  The closed form is
    seeded with the first sample's l, measured from the first time and
    reported as its larger branch so it compares directly with l.
    """
    if h_max_value is None:
        h_max_value = h_max(h, s1, s2).value
    evo = evolve(h, psi0, times, s1, s2)
    out = []
    lam0 = float(evo.schmidt_lambdas[0]) if len(times) else 0.0
    for t, psi in zip(evo.times, evo.states):
        psi = psi / math.sqrt(_joint_inner(s1, s2, psi, psi).real)
        sf = schmidt(psi, s1, s2)
        lam = float(sf.weights[0])
        g = f_lambda(lam) * _schmidt_h(h, sf).imag
        bound = abs(gamma_bound(lam, h_max_value)) if 0.0 < lam < 1.0 else math.inf
        out.append(
            RateSample(
                float(t),
                lam,
                shannon_bits(sf.weights),
                g,
                bound,
                _larger(lambda_closed_form(h_max_value, min(lam0, 1.0), float(t - evo.times[0]))),
            )
        )
    return out
