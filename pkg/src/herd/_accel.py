"""Optional numba acceleration.

Kernels are written in the numba-compatible subset of Python.  When numba is
importable and ``HERD_NUMBA`` is not set to ``0``, they are compiled with
``@njit``; otherwise the same functions run as plain Python/numpy.  The
uncompiled function is always reachable through ``kernel.py_func``.
"""

import os

_DISABLED = os.environ.get("HERD_NUMBA", "1").strip().lower() in ("0", "false", "no", "off")

try:
    if _DISABLED:
        raise ImportError
    import numba

    NUMBA_ENABLED = True
except ImportError:
    numba = None
    NUMBA_ENABLED = False


def jit(func):
    """Compile ``func`` in nopython mode when numba is enabled."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(func)
    func.py_func = func
    return func


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "python"
