"""Imaginary quadratic fields, their orders, and the conductor formula for
class numbers of non-maximal orders."""

from dataclasses import dataclass
from functools import lru_cache

from cmrt.arith import factorize, is_discriminant, is_fundamental_discriminant, kronecker
from cmrt.errors import ConsistencyError, DomainError
from cmrt.forms import class_number

__all__ = [
    "QuadField",
    "QuadOrder",
    "count_units",
    "make_field",
    "make_order",
    "max_conductor_prime_bound",
    "norm_form",
    "order_class_number",
    "roots_of_unity_count",
]


@dataclass(frozen=True)
class QuadField:
    d_K: int
    h_K: int
    w_K: int


@dataclass(frozen=True)
class QuadOrder:
    field: QuadField
    f: int
    disc: int
    h: int
    w: int


def roots_of_unity_count(d: int) -> int:
    return {-3: 6, -4: 4}.get(d, 2)


def norm_form(d: int) -> tuple[int, int]:
    """Coefficients ``(p, q)`` with ``N(x + y*w) = x^2 + p*x*y + q*y^2``.

    ``w = (1 + sqrt d)/2`` when ``d = 1 mod 4`` and ``w = sqrt(d)/2`` when
    ``d = 0 mod 4``, so ``Z[w]`` is the order of discriminant ``d``.
    """
    p = d % 2
    return p, (p - d) // 4


def count_units(d: int) -> int:
    """Count solutions of ``x^2 + pxy + qy^2 = 1`` for the order of discriminant ``d``."""
    if not is_discriminant(d):
        raise DomainError(f"{d} is not a negative discriminant")
    p, q = norm_form(d)
    # 4N = (2x + py)^2 + |d| y^2, so N = 1 forces |y| <= 2/sqrt|d| and |x| <= 2
    return sum(
        1
        for x in range(-2, 3)
        for y in range(-2, 3)
        if x * x + p * x * y + q * y * y == 1
    )


@lru_cache(maxsize=4096)
def make_field(d_K: int) -> QuadField:
    if not is_fundamental_discriminant(d_K):
        raise DomainError(f"{d_K} is not a fundamental discriminant")
    return QuadField(d_K=d_K, h_K=class_number(d_K), w_K=roots_of_unity_count(d_K))


def _unit_index(d_K: int, f: int) -> int:
    # O_f^x = {+-1} once f > 1
    return roots_of_unity_count(d_K) // 2 if f > 1 else 1


def order_class_number(d_K: int, f: int, h_K: int | None = None) -> int:
    """h(O_f) from h(O_K) and the factorization of the conductor ``f``.

    h(O_f) = h_K * f * prod_{p | f} (1 - (d_K/p)/p) / [O_K^x : O_f^x]
    """
    if not is_fundamental_discriminant(d_K):
        raise DomainError(f"{d_K} is not a fundamental discriminant")
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    if h_K is None:
        h_K = class_number(d_K)
    num = h_K
    for p, a in factorize(f).factors:
        num *= p ** (a - 1) * (p - kronecker(d_K, p))
    index = _unit_index(d_K, f)
    h, rem = divmod(num, index)
    if rem:
        raise ConsistencyError(f"h(O_f) for d_K={d_K}, f={f}: {num}/{index} is not integral")
    return h


def make_order(d_K: int, f: int) -> QuadOrder:
    field = make_field(d_K)
    h = order_class_number(d_K, f, field.h_K)
    w = field.w_K if f == 1 else 2
    return QuadOrder(field=field, f=f, disc=f * f * d_K, h=h, w=w)


def max_conductor_prime_bound(n: int, w_K: int) -> int:
    """Largest prime that can divide the conductor when h(O_f) <= n: (w_K/2) n + 1."""
    if n < 1:
        raise DomainError(f"degree must be positive, got {n}")
    if w_K not in (2, 4, 6):
        raise DomainError(f"w_K must be 2, 4 or 6, got {w_K}")
    return (w_K // 2) * n + 1
