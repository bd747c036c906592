"""Hot integer loops, each with a numba and a pure-numpy implementation.

The public functions dispatch on ``backend`` (``"numba"`` or ``"numpy"``);
``None`` means the process default from :func:`cmrt._accel.default_backend`.
Both implementations must agree bit-for-bit; the test suite checks this.

Discriminants are passed as their absolute value ``D = -d > 0`` except where
noted.
"""

from math import isqrt

import numpy as np

from cmrt._accel import HAS_NUMBA, default_backend, njit

__all__ = [
    "count_reduced_forms",
    "reduced_form_counts",
    "residue_unit_count",
    "resolve_backend",
]


def resolve_backend(backend=None):
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


# -- single discriminant: primitive reduced forms -------------------------


@njit
def _gcd(x, y):
    x = abs(x)
    y = abs(y)
    while y:
        x, y = y, x % y
    return x


@njit
def _count_reduced_forms_nb(D):
    # D = |d|, d = b^2 - 4ac
    count = 0
    a = 1
    while 3 * a * a <= D:
        four_a = 4 * a
        b0 = -a + 1
        if (b0 - D) % 2 != 0:
            b0 += 1
        for b in range(b0, a + 1, 2):
            num = b * b + D
            if num % four_a != 0:
                continue
            c = num // four_a
            if c < a or (c == a and b < 0):
                continue
            if _gcd(_gcd(a, b), c) == 1:
                count += 1
        a += 1
    return count


def _count_reduced_forms_np(D):
    count = 0
    amax = isqrt(D // 3)
    for a in range(1, amax + 1):
        b0 = -a + 1
        if (b0 - D) % 2:
            b0 += 1
        b = np.arange(b0, a + 1, 2, dtype=np.int64)
        num = b * b + D
        ok = num % (4 * a) == 0
        b = b[ok]
        c = num[ok] // (4 * a)
        keep = (c > a) | ((c == a) & (b >= 0))
        b = b[keep]
        c = c[keep]
        g = np.gcd(np.gcd(a, b), c)
        count += int(np.count_nonzero(g == 1))
    return count


def count_reduced_forms(D: int, backend=None) -> int:
    """Number of primitive reduced forms of discriminant ``-D``.

    ``D`` must be positive with ``-D`` congruent to 0 or 1 mod 4; callers
    validate. Python ints beyond int64 are not supported here.
    """
    if resolve_backend(backend) == "numba":
        return int(_count_reduced_forms_nb(np.int64(D)))
    return _count_reduced_forms_np(int(D))


# -- all discriminants up to a limit -------------------------------------


@njit
def _reduced_form_counts_nb(limit):
    counts = np.zeros(limit + 1, dtype=np.int32)
    a = 1
    while 3 * a * a <= limit:
        for b in range(-a + 1, a + 1):
            c = a if b >= 0 else a + 1
            D = 4 * a * c - b * b
            step = 4 * a
            while D <= limit:
                counts[D] += 1
                D += step
        a += 1
    return counts


def _reduced_form_counts_np(limit):
    counts = np.zeros(limit + 1, dtype=np.int32)
    amax = isqrt(limit // 3)
    for a in range(1, amax + 1):
        step = 4 * a
        for b in range(-a + 1, a + 1):
            c = a if b >= 0 else a + 1
            start = 4 * a * c - b * b
            if start <= limit:
                counts[start::step] += 1
    return counts


def reduced_form_counts(limit: int, backend=None) -> np.ndarray:
    """Count reduced forms, primitive or not, for every ``D <= limit``.

    Entry ``D`` of the returned int32 array is the number of reduced forms
    ``(a, b, c)`` with ``4ac - b^2 = D``. For fundamental ``-D`` every form
    is primitive, so the entry is the class number.
    """
    if limit < 0:
        raise ValueError("limit must be non-negative")
    if resolve_backend(backend) == "numba":
        return _reduced_form_counts_nb(np.int64(limit))
    return _reduced_form_counts_np(int(limit))


# -- residue ring O_K / ell O_K ------------------------------------------


@njit
def _residue_unit_count_nb(p, q, ell):
    # norm form x^2 + p*x*y + q*y^2
    count = 0
    for x in range(ell):
        for y in range(ell):
            if (x * x + p * x * y + q * y * y) % ell != 0:
                count += 1
    return count


def _residue_unit_count_np(p, q, ell):
    x = np.arange(ell, dtype=np.int64)[:, None]
    y = np.arange(ell, dtype=np.int64)[None, :]
    norm = (x * x + p * x * y + q * y * y) % ell
    return int(np.count_nonzero(norm))


def residue_unit_count(p: int, q: int, ell: int, backend=None) -> int:
    """Count residues ``x + y*w`` mod ``ell`` whose norm ``x^2 + pxy + qy^2`` is prime to ``ell``.

    ``p`` and ``q`` are reduced mod ``ell`` first so the products stay small.
    """
    p %= ell
    q %= ell
    if resolve_backend(backend) == "numba":
        return int(_residue_unit_count_nb(np.int64(p), np.int64(q), np.int64(ell)))
    return _residue_unit_count_np(p, q, ell)
