"""Backend switch for the hot kernels.

Kernels are written once in a numba-compatible subset of Python/numpy.
When numba is importable and ``CTSENSE_DISABLE_NUMBA`` is unset (or "0"),
they are compiled with ``numba.njit``; otherwise the plain functions run
and the callers take their vectorized numpy paths where one exists.
"""

import os

_flag = os.environ.get("CTSENSE_DISABLE_NUMBA", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when the numba backend is active, identity otherwise."""
    if HAS_NUMBA:
        return numba.njit(*args, cache=True, nogil=True, **kwargs)

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(fn):
        return fn

    return wrap
