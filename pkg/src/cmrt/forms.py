"""Class numbers of negative discriminants by counting reduced primitive
binary quadratic forms."""

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from cmrt import kernels
from cmrt.arith import is_discriminant
from cmrt.errors import DomainError

__all__ = [
    "ReducedForm",
    "class_number",
    "enumerate_reduced_forms",
    "fundamental_class_numbers",
    "fundamental_mask",
]


@dataclass(frozen=True, order=True)
class ReducedForm:
    """The form ``a x^2 + b xy + c y^2``."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if b * b - 4 * a * c >= 0:
            raise ValueError(f"{self} is not positive definite")
        if not (abs(b) <= a <= c) or ((abs(b) == a or a == c) and b < 0):
            raise ValueError(f"{self} is not reduced")
        if gcd(gcd(a, b), c) != 1:
            raise ValueError(f"{self} is not primitive")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c


def _check(d: int) -> None:
    if not is_discriminant(d):
        raise DomainError(f"{d} is not a negative discriminant (need d < 0, d = 0 or 1 mod 4)")


def enumerate_reduced_forms(d: int) -> list[ReducedForm]:
    """All reduced primitive forms of discriminant ``d``, sorted by ``(a, b, c)``."""
    _check(d)
    forms = []
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                forms.append(ReducedForm(a, b, c))
    forms.sort()
    return forms


def class_number(d: int, backend=None) -> int:
    """h(d): the number of reduced primitive forms of discriminant ``d``.

    For non-fundamental ``d = f^2 d_K`` this is the class number of the
    order of conductor ``f``, not a Hurwitz class number.
    """
    _check(d)
    return kernels.count_reduced_forms(-d, backend=backend)


def fundamental_mask(limit: int) -> np.ndarray:
    """Boolean array ``m`` with ``m[D]`` true iff ``-D`` is a fundamental discriminant."""
    D = np.arange(limit + 1, dtype=np.int64)
    squarefree = np.ones(limit + 1, dtype=bool)
    squarefree[0] = False
    for p in range(2, isqrt(limit) + 1):
        squarefree[p * p :: p * p] = False
    mask = (D % 4 == 3) & squarefree
    quarter = D // 4
    mask |= (D % 4 == 0) & ((quarter % 4 == 1) | (quarter % 4 == 2)) & squarefree[quarter]
    return mask


def fundamental_class_numbers(limit: int, backend=None) -> list[tuple[int, int]]:
    """``(|d|, h)`` for every fundamental ``d`` with ``|d| <= limit``, by ``|d|``."""
    if limit < 3:
        return []
    counts = kernels.reduced_form_counts(limit, backend=backend)
    idx = np.nonzero(fundamental_mask(limit))[0]
    return [(int(D), int(h)) for D, h in zip(idx, counts[idx])]
