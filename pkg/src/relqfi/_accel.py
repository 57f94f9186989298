"""Optional numba acceleration.

Hot kernels are written once as plain loops and compiled with ``numba.njit``
when numba is importable. Setting ``RELQFI_DISABLE_NUMBA=1`` forces the
pure-numpy fallbacks, which are vectorised rewrites of the same kernels.
"""
import os

_FLAG = os.environ.get("RELQFI_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def jit(func):
    """Compile ``func`` in nopython mode, or return None if numba is missing."""
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, fastmath=False)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
