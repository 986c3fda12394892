"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (also repeated in the pytest
terminal summary).  Run standalone with ``python3 tests/test_acceptance.py``.
"""
import math
import os
import subprocess
import sys

import numpy as np
import scipy.linalg

from cpt_entangle.dynamics import closed_form_amplitudes, entangling_unitary, evolve, product_hamiltonian
from cpt_entangle.entanglement import (
    cross_theory_singlet_entropy,
    eigen_product_state,
    entanglement_entropy,
    entropy,
    is_product,
    reduced_density,
    schmidt,
    two_ptqubit_entanglement,
)
from cpt_entangle.metric import MetricSpace, inner, normalize, tensor_space
from cpt_entangle.ptqubit import PTParams, build, verify_algebra
from cpt_entangle.rate import gamma, h_max, h_value, trajectory

from conftest import ACCEPTANCE_LINES, param_grid, random_complex, random_system, random_unit

SX = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = MetricSpace.identity(2)
E00 = np.array([1, 0, 0, 0], dtype=complex)
SEED = 20261016


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _unit_state(s1, s2, psi):
    return normalize(tensor_space(s1, s2), psi)


def test_criterion_01_cpt_orthonormality():
    worst = 0.0
    for p in param_grid(50):
        sys_ = build(p)
        pl, mi = sys_.eigenbasis
        worst = max(
            worst,
            abs(inner(sys_.space, pl, pl) - 1),
            abs(inner(sys_.space, mi, mi) - 1),
            abs(inner(sys_.space, pl, mi)),
            abs(inner(sys_.space, mi, pl)),
        )
    report(1, "CPT orthonormality of eigenstates (50-point grid)", worst < 1e-12, f"max deviation {worst:.2e} < 1e-12")


def test_criterion_02_conjugation_algebra():
    keys = ("c_squared", "c_h", "c_pt", "metric_adjoint")
    worst = {k: 0.0 for k in keys}
    for p in param_grid(50):
        rep = verify_algebra(build(p))
        for k in keys:
            worst[k] = max(worst[k], rep[k])
    ok = max(worst.values()) < 1e-12
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    report(2, "C^2=I, [C,H], [C,PT], H^H M = M H (50-point grid)", ok, detail + " < 1e-12")


def test_criterion_03_hermitian_limit():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for r, s in ((0.0, 1.0), (0.7, 1.3), (-1.2, 0.6)):
        sys1 = build(PTParams(r, s, s, 0.0))
        sys2 = build(PTParams(0.4, 2.0, 2.0, 0.0))
        m1, m2 = sys1.space, sys2.space
        h = product_hamiltonian(sys1, sys2).matrix
        for _ in range(5):
            psi = random_complex(rng, 4)
            psi /= np.linalg.norm(psi)
            sf_pt, sf_id = schmidt(psi, m1, m2), schmidt(psi, I2, I2)
            worst = max(
                worst,
                abs(entanglement_entropy(psi, m1, m2) - entanglement_entropy(psi, I2, I2)),
                abs(entropy(reduced_density(psi, m1, m2)) - entropy(reduced_density(psi, I2, I2, theory="dirac"))),
                float(np.max(np.abs(sf_pt.coefficients - sf_id.coefficients))),
                abs(gamma(h, psi, m1, m2, signed=True) - gamma(h, psi, I2, I2, signed=True)),
            )
        worst = max(worst, abs(h_max(h, m1, m2).value - h_max(h, I2, I2).value))
    report(3, "theta=0 matches identity-metric results", worst < 1e-12, f"max deviation {worst:.2e} < 1e-12")


def test_criterion_04_singlet_cross_theory():
    at_zero = cross_theory_singlet_entropy(0.0)
    alphas = [0.1, 0.2, 0.3, 0.4, 0.5]
    vals = [cross_theory_singlet_entropy(a) for a in alphas]
    oracle = [v.pipeline_value for v in vals]
    pi6 = cross_theory_singlet_entropy(math.pi / 6).pipeline_value
    ok = (
        at_zero.pipeline_value == 1.0
        and all(v < 1 for v in oracle)
        and all(b < a for a, b in zip(oracle, oracle[1:]))
        and abs(pi6 - 0.468996) < 1e-6
    )
    gaps = ", ".join(f"a={a}: closed form {v.closed_form_value:.6f} vs pipeline {v.pipeline_value:.6f}" for a, v in zip(alphas, vals))
    report(
        4,
        "Dirac singlet under CPT trace",
        ok,
        f"E(0)={at_zero.pipeline_value:.6f}, E(pi/6)={pi6:.6f} (target 0.468996), decreasing on 0.1..0.5; "
        f"the (1 +- 2 sin a)/2 closed form disagrees: {gaps}",
    )


def test_criterion_05_closed_form_entanglement():
    rng = np.random.default_rng(SEED + 5)
    worst, mismatched = 0.0, 0
    for k in range(1000):
        s1, s2 = random_system(rng), random_system(rng)
        if k % 2:
            amps = np.kron(random_complex(rng, 2), random_complex(rng, 2))
        else:
            amps = random_complex(rng, 4)
        amps /= np.linalg.norm(amps)
        psi = eigen_product_state(amps, s1, s2)
        pipeline = entanglement_entropy(psi, s1.space, s2.space)
        closed = two_ptqubit_entanglement(*amps)
        worst = max(worst, abs(pipeline - closed))
        if (pipeline < 1e-12) != is_product(*amps):
            mismatched += 1
    ok = worst < 1e-9 and mismatched == 0
    report(5, "closed-form entropy vs Schmidt pipeline (1000 states)", ok, f"max |dE| {worst:.2e} < 1e-9; separability mismatches {mismatched}")


def test_criterion_06_entangling_unitary():
    rng = np.random.default_rng(SEED + 6)
    worst_u = worst_a = 0.0
    for _ in range(30):
        s1, s2 = random_system(rng), random_system(rng)
        t = rng.uniform(0.0, 5.0)
        ph = product_hamiltonian(s1, s2)
        u = entangling_unitary(ph, t)
        worst_u = max(worst_u, float(np.max(np.abs(u - scipy.linalg.expm(-1j * t * ph.nonlocal_part)))))
        amps = np.array(closed_form_amplitudes(s1.params, s2.params, t))
        worst_a = max(worst_a, float(np.max(np.abs(amps - u @ E00))))
    ok = worst_u < 1e-10 and worst_a < 1e-12
    report(6, "entangling unitary and |00> amplitudes (30 draws)", ok, f"unitary {worst_u:.2e} < 1e-10, amplitudes {worst_a:.2e} < 1e-12")


def test_criterion_07_local_terms_irrelevant():
    rng = np.random.default_rng(SEED + 7)
    ts = np.linspace(0.0, 3.0, 31)
    worst = 0.0
    for _ in range(10):
        s1, s2 = random_system(rng), random_system(rng)
        ph = product_hamiltonian(s1, s2)
        psi0 = random_unit(tensor_space(s1.space, s2.space), rng)
        full = evolve(ph.matrix, psi0, ts, s1.space, s2.space).entropies
        nl = evolve(ph.nonlocal_part, psi0, ts, s1.space, s2.space).entropies
        worst = max(worst, float(np.max(np.abs(full - nl))))
    report(7, "full vs nonlocal-only trajectories (10 draws, t in [0,3])", worst < 1e-9, f"max |dE| {worst:.2e} < 1e-9")


def _entropy_at(h, psi0, t, s1, s2):
    psi = evolve(h, psi0, [t], s1, s2).states[0]
    return entanglement_entropy(_unit_state(s1, s2, psi), s1, s2)


def test_criterion_08_rate_consistency():
    rng = np.random.default_rng(SEED + 8)
    step = 1e-5
    ts = np.linspace(0.0, 3.0, 100)
    worst_fd, worst_bound = 0.0, -math.inf
    checked = 0
    cases = [(I2, I2, np.kron(SX, SX), E00)]
    for _ in range(4):
        s1, s2 = random_system(rng), random_system(rng)
        ph = product_hamiltonian(s1, s2)
        cases.append((s1.space, s2.space, ph.matrix, _unit_state(s1.space, s2.space, E00)))
        cases.append((s1.space, s2.space, ph.matrix, random_unit(tensor_space(s1.space, s2.space), rng)))
    for m1, m2, h, psi0 in cases:
        traj = trajectory(h, psi0, m1, m2, ts)
        for smp in traj:
            if math.isfinite(smp.bound):
                worst_bound = max(worst_bound, abs(smp.gamma) - smp.bound)
            if min(abs(smp.lam - 0.5), abs(1 - smp.lam), smp.lam) < 1e-6:
                continue
            fd = (_entropy_at(h, psi0, smp.t + step, m1, m2) - _entropy_at(h, psi0, smp.t - step, m1, m2)) / (2 * step)
            worst_fd = max(worst_fd, abs(smp.gamma - fd))
            checked += 1
    hx = h_max(np.kron(SX, SX), I2, I2).value
    sig = evolve(np.kron(SX, SX), E00, ts, I2, I2)
    worst_sin = 0.0
    for t, psi in zip(ts, sig.states):
        w = schmidt(psi, I2, I2).weights
        worst_sin = max(worst_sin, float(np.min(np.abs(w - math.sin(t) ** 2))))
    ok = worst_fd < 1e-5 and worst_bound <= 1e-8 and abs(hx - 1) < 1e-6 and worst_sin < 1e-9
    report(
        8,
        "rate vs finite differences, bound, sigma_x(x)sigma_x",
        ok,
        f"|Gamma - dE/dt| {worst_fd:.2e} < 1e-5 over {checked} samples; worst bound excess {worst_bound:.2e} <= 1e-8; "
        f"h_max {hx:.9f}; |lambda - sin^2 t| {worst_sin:.2e} < 1e-9",
    )


def test_criterion_09_optimizer_soundness():
    rng = np.random.default_rng(SEED + 9)
    worst_margin, worst_gap = -math.inf, 0.0
    for _ in range(10):
        s1 = random_system(rng)
        s2 = random_system(rng)
        h = product_hamiltonian(s1, s2).matrix
        res = h_max(h, s1.space, s2.space)
        worst_gap = max(worst_gap, abs(res.multistart_value - res.grid_value))
        for _ in range(1000):
            a, b = random_unit(s1.space, rng), random_unit(s2.space, rng)
            worst_margin = max(worst_margin, abs(h_value(h, a, b, s1.space, s2.space)) - res.value)
    ok = worst_margin <= 1e-8 and worst_gap < 1e-6
    report(9, "h_max dominates samples; multistart vs grid", ok, f"max |h| - h_max {worst_margin:.2e} <= 1e-8; route gap {worst_gap:.2e} < 1e-6")


def _cli(*args):
    env = dict(os.environ)
    return subprocess.run([sys.executable, "-m", "cpt_entangle", *args], capture_output=True, env=env, check=False)


def test_criterion_10_cli_determinism():
    commands = [
        ("rate", "--seed", "5", "--steps", "11"),
        ("hmax", "--seed", "5", "--theta2", "0.9"),
        ("singlet-sweep", "--alpha-max", "0.5", "--steps", "6"),
    ]
    same = True
    for cmd in commands:
        a, b = _cli(*cmd), _cli(*cmd)
        same &= a.returncode == b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    report(10, "repeated CLI runs are byte-identical", same, f"{len(commands)} commands run twice each")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
