"""Exact integer primitives: Kronecker symbol, primality, factorization and
discriminant tests. Everything works on Python ints of any size."""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, prod

from cmrt.errors import DomainError

__all__ = [
    "FactoredInteger",
    "factorize",
    "fundamental_part",
    "is_discriminant",
    "is_fundamental_discriminant",
    "is_prime",
    "is_squarefree",
    "kronecker",
    "largest_prime_at_most",
    "largest_prime_factor",
    "require_odd_prime",
]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for every pair of integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# Strong-pseudoprime witnesses. The first set is exact below 341550071728321,
# the second below 318665857834031151167461.
_MR_SMALL = (2, 3, 5, 7, 11, 13, 17)
_MR_SMALL_LIMIT = 341_550_071_728_321
_MR_LARGE = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _strong_probable_prime(n: int, base: int, d: int, s: int) -> bool:
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin.

    Proven exact below 3.18e23; beyond that the fixed witness set makes the
    answer a (very strong) probable-prime test.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_SMALL if n < _MR_SMALL_LIMIT else _MR_LARGE
    return all(_strong_probable_prime(n, b, d, s) for b in bases)


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if prod(p**e for p, e in self.factors) != abs(self.value):
            raise ValueError(f"factors do not multiply to |{self.value}|")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)) or any(e < 1 for _, e in self.factors):
            raise ValueError("factors must be distinct and increasing with positive exponents")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


_TRIAL_LIMIT = 10**6


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard rho failed on {n}")  # pragma: no cover


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (_TRIAL_LIMIT + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(_TRIAL_LIMIT) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, _TRIAL_LIMIT + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def factorize(n: int) -> FactoredInteger:
    """Complete factorization of ``n >= 1``: trial division, then Pollard-Brent."""
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    found: dict[int, int] = {}
    m = n
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    else:
        # every prime below the trial limit was tried; the cofactor may be composite
        if m > 1:
            _split(m, found)
            m = 1
    if m > 1:
        found[m] = found.get(m, 0) + 1
    return FactoredInteger(n, tuple(sorted(found.items())))


def largest_prime_factor(n: int) -> int:
    if n < 2:
        raise DomainError(f"largest_prime_factor needs n >= 2, got {n}")
    return factorize(n).factors[-1][0]


def largest_prime_at_most(x: int) -> int:
    if x < 2:
        raise DomainError(f"no prime is <= {x}")
    while not is_prime(x):
        x -= 1
    return x


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(abs(n)).factors)


def is_discriminant(d: int) -> bool:
    """True for negative d congruent to 0 or 1 mod 4."""
    return d < 0 and d % 4 in (0, 1)


def is_fundamental_discriminant(d: int) -> bool:
    if d >= 0:
        raise DomainError(f"expected a negative discriminant, got {d}")
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_part(d: int) -> tuple[int, int]:
    """Split a negative discriminant as ``d = f**2 * d_K``; returns ``(d_K, f)``."""
    if not is_discriminant(d):
        raise DomainError(f"{d} is not a negative discriminant")
    f = 1
    for p, e in factorize(-d).factors:
        f *= p ** (e // 2)
    d_k = d // (f * f)
    if d_k % 4 in (2, 3):
        d_k *= 4
        f //= 2
    return d_k, f


def require_odd_prime(ell: int) -> None:
    if ell == 2 or not is_prime(ell):
        raise DomainError("ell must be an odd prime")
