"""Compare the numba-compiled kernels with the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--grid N]

Per-kernel timings call the compiled function and its ``py_func`` side by
side in one process.  The end-to-end row runs ``h_max`` in two subprocesses,
one with CPT_ENTANGLE_DISABLE_NUMBA=1.
"""
import argparse
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from cpt_entangle import _accel, _kernels

E2E = """
import math, time
from cpt_entangle import build, PTParams, product_hamiltonian, h_max
s = build(PTParams(1.0, 1.0, 1.0, math.pi / 6))
h = product_hamiltonian(s, s).matrix
h_max(h, s.space, s.space, grid={grid})
t0 = time.perf_counter()
h_max(h, s.space, s.space, grid={grid})
print(time.perf_counter() - t0)
"""


def best_of(fn, repeat):
    fn()  # warm-up (and compilation)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_cases(grid):
    rng = np.random.default_rng(0)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    herm = a + a.conj().T
    ht = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    th = np.linspace(0.0, math.pi, grid)
    ph = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    x0 = np.array([0.5, 1.0, 2.0, 3.0])
    return [
        ("jacobi_eigh 8x8", _kernels.jacobi_eigh, (herm, 1e-14, 60)),
        ("expm_taylor 8x8", _kernels.expm_taylor, (a, 40)),
        ("nelder_mead_h", _kernels.nelder_mead_h, (ht, x0, 0.4, 1e-12, 1e-7, 20000)),
        (f"h grid {grid}^4 (loops)", _kernels._h_grid_loops, (ht, th, ph, th, ph)),
    ], (ht, th, ph)


def end_to_end(grid, disable):
    env = dict(os.environ)
    env["CPT_ENTANGLE_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run([sys.executable, "-c", E2E.format(grid=grid)], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--grid", type=int, default=12, help="grid size for the in-process loop comparison")
    args = ap.parse_args(argv)

    if not _accel.USE_NUMBA:
        print("numba is not active; only the numpy path can be timed", file=sys.stderr)
        return 1

    print(f"{'kernel':28s} {'numba [s]':>12s} {'python [s]':>12s} {'speedup':>9s}")
    cases, (ht, th, ph) = kernel_cases(args.grid)
    for name, fn, fargs in cases:
        fast = best_of(lambda: fn(*fargs), args.repeat)
        slow = best_of(lambda: fn.py_func(*fargs), args.repeat)
        print(f"{name:28s} {fast:12.6f} {slow:12.6f} {slow / fast:8.1f}x")

    fast = best_of(lambda: _kernels._h_grid_loops(ht, th, ph, th, ph), args.repeat)
    vec = best_of(lambda: _kernels._h_grid_vectorized(ht, th, ph, th, ph), args.repeat)
    print(f"{f'h grid {args.grid}^4 (einsum)':28s} {fast:12.6f} {vec:12.6f} {vec / fast:8.1f}x")

    fast, slow = end_to_end(24, False), end_to_end(24, True)
    print(f"{'h_max end to end':28s} {fast:12.6f} {slow:12.6f} {slow / fast:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
