"""Numba switch.

Set ``MOMAPF_DISABLE_NUMBA=1`` to force the pure numpy/python kernels.
"""
import os

_DISABLED = os.environ.get("MOMAPF_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and not _DISABLED


def njit(fn):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn
