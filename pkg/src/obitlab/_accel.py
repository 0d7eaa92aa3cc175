"""Selects between numba-compiled kernels and the pure-numpy fallback.

Set ``OBITLAB_NUMBA=0`` to force the numpy path. ``OBITLAB_CHECK_NORMS=1``
turns on the extra norm re-checks that operations otherwise skip.
"""
import os

_FALSY = {"0", "false", "no", "off", ""}


def _flag(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() not in _FALSY


try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and _flag("OBITLAB_NUMBA", True)
CHECK_NORMS = _flag("OBITLAB_CHECK_NORMS", False)

# fastmath stays off: the kernels are compared against oracles at 1e-10.
NJIT_OPTIONS = dict(cache=True, nogil=True, fastmath=False)


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if not HAS_NUMBA:
        return func
    return numba.njit(**NJIT_OPTIONS)(func)


def select(loop_impl, numpy_impl):
    """Pick the jitted loop kernel or the numpy fallback per ``USE_NUMBA``."""
    return loop_impl if USE_NUMBA else numpy_impl
