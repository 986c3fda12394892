import math

import numpy as np
import pytest

from cpt_entangle import MetricSpace, PTParams, build


def random_params(rng, s_range=(0.5, 2.0), margin=0.9):
    """Unbroken symmetric parameters with |sin(alpha)| <= margin."""
    s = rng.uniform(*s_range)
    theta = rng.uniform(-math.pi, math.pi)
    sin_t = math.sin(theta)
    r_max = margin * s / max(abs(sin_t), 1e-3)
    r = rng.uniform(-1.0, 1.0) * min(r_max, 3.0)
    return PTParams(r, s, s, theta)


def random_system(rng, **kw):
    return build(random_params(rng, **kw))


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_metric_space(rng, dim, cond=10.0):
    q, _ = np.linalg.qr(random_complex(rng, dim, dim))
    w = np.exp(rng.uniform(0, math.log(cond), size=dim))
    return MetricSpace((q * w) @ q.conj().T)


def random_unit(space, rng):
    v = random_complex(rng, space.dim)
    return v / math.sqrt((np.conj(v) @ space.metric @ v).real)


def metric_unitary(space, rng):
    """S^{-1} V S with V Dirac-unitary preserves the metric inner product."""
    v, _ = np.linalg.qr(random_complex(rng, space.dim, space.dim))
    return space.inv_sqrt_metric @ v @ space.sqrt_metric


def param_grid(n=50):
    """Deterministic grid of unbroken symmetric parameters."""
    out = []
    for r in np.linspace(-1.5, 1.5, 5):
        for k, theta in enumerate(np.linspace(-3.0, 3.0, 10)):
            s = 1.0 + 0.5 * (k % 3)
            if (r * math.sin(theta)) ** 2 >= 0.81 * s * s:
                s = abs(r * math.sin(theta)) / 0.8
            out.append(PTParams(float(r), s, s, float(theta)))
    return out[:n]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def sys_pi6():
    return build(PTParams(1.0, 1.0, 1.0, math.pi / 6))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
