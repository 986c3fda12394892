"""Kernel backend selection.

The hot loops in :mod:`cpt_entangle._kernels` are written once in the subset
of Python that numba compiles.  When numba is importable they are compiled
with ``@njit``; setting ``CPT_ENTANGLE_DISABLE_NUMBA=1`` (or running without
numba) leaves them as plain numpy code.

``CPT_ENTANGLE_THREADS`` caps the number of worker threads used to fan out
optimizer starts and grid slices.  Compiled kernels release the GIL.
"""
import os

_FALSY = ("", "0", "false", "no", "off")

DISABLED = os.environ.get("CPT_ENTANGLE_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    if DISABLED:
        raise ImportError
    import numba
except ImportError:
    numba = None

USE_NUMBA = numba is not None


def jit(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend():
    return "numba" if USE_NUMBA else "numpy"


def max_threads():
    raw = os.environ.get("CPT_ENTANGLE_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
