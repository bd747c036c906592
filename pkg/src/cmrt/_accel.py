"""Backend selection for the numeric kernels.

Set ``CMRT_DISABLE_NUMBA=1`` to force the pure-numpy code path. When numba
is not importable the numpy path is used regardless of the flag.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAS_NUMBA = numba is not None

_FALSY = {"", "0", "false", "no", "off"}


def numba_requested() -> bool:
    return os.environ.get("CMRT_DISABLE_NUMBA", "").strip().lower() in _FALSY


def default_backend() -> str:
    if HAS_NUMBA and numba_requested():
        return "numba"
    return "numpy"


numba_default = {
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "boundscheck": False,
}


def njit(func):
    """``numba.njit`` with the package defaults, or the identity without numba."""
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(**numba_default)(func)
