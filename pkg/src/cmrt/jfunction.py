"""The modular j-function through its q-expansion, evaluated at CM points of
class number one to recover their (integer) j-invariants."""

from functools import lru_cache

import mpmath

from cmrt.errors import DomainError, PrecisionError
from cmrt.forms import enumerate_reduced_forms

__all__ = ["cm_j_value", "j_coefficients", "j_at"]

MIN_TERMS = 25
MIN_DPS = 40


@lru_cache(maxsize=8)
def j_coefficients(terms: int) -> tuple[int, ...]:
    """Coefficients ``c`` with ``j(q) = sum_k c[k] q^(k-1)``, so ``c = (1, 744, 196884, ...)``.

    Built from j = E4^3 / Delta with E4 = 1 + 240 sum sigma_3(n) q^n and
    Delta / q = prod (1 - q^n)^24, all in exact integer arithmetic.
    """
    N = terms
    sigma3 = [0] * N
    for d in range(1, N):
        for m in range(d, N, d):
            sigma3[m] += d**3
    e4 = [1] + [240 * sigma3[n] for n in range(1, N)]

    def mul(u, v):
        out = [0] * N
        for i, ui in enumerate(u):
            if ui:
                for k in range(N - i):
                    out[i + k] += ui * v[k]
        return out

    e4_cubed = mul(mul(e4, e4), e4)
    # prod (1 - q^n)^24, truncated
    eta24 = [1] + [0] * (N - 1)
    for n in range(1, N):
        for _ in range(24):
            for k in range(N - 1, n - 1, -1):
                eta24[k] -= eta24[k - n]
    # invert a series with constant term 1
    inv = [1] + [0] * (N - 1)
    for k in range(1, N):
        inv[k] = -sum(eta24[i] * inv[k - i] for i in range(1, k + 1))
    return tuple(mul(e4_cubed, inv))


def j_at(tau, terms: int = 60, dps: int = 60, ctx=None):
    """Evaluate j(tau) for ``Im(tau) > 0`` by truncated q-expansion.

    Returns ``(value, tail)`` where ``tail`` is the magnitude of the first
    omitted term. A private mpmath context is used unless one is given.
    """
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = dps
    tau = ctx.mpc(tau)
    if tau.imag <= 0:
        raise DomainError("tau must lie in the upper half plane")
    coeffs = j_coefficients(terms + 1)
    q = ctx.exp(2j * ctx.pi * tau)
    acc = ctx.mpc(0)
    for c in reversed(coeffs[:terms]):
        acc = acc * q + c
    tail = abs(coeffs[terms] * q ** (terms - 1))
    return acc / q, tail


@lru_cache(maxsize=64)
def cm_j_value(order_disc: int, terms: int = 60, dps: int = 60) -> int:
    """The integer j-invariant of the order of discriminant ``order_disc``.

    Only class-number-one orders are accepted. Raises PrecisionError unless the
    evaluated value sits within 0.25 of an integer and the series tail is tiny.
    """
    if terms < MIN_TERMS or dps < MIN_DPS:
        raise DomainError(f"need at least {MIN_TERMS} terms and {MIN_DPS} digits")
    forms = enumerate_reduced_forms(order_disc)
    if len(forms) != 1:
        raise DomainError(f"discriminant {order_disc} has class number {len(forms)}, not 1")
    a, b, _ = forms[0]
    ctx = mpmath.MPContext()
    ctx.dps = dps
    tau = ctx.mpc(-b, ctx.sqrt(-order_disc)) / (2 * a)
    value, tail = j_at(tau, terms=terms, ctx=ctx)
    nearest = ctx.nint(value.real)
    distance = abs(value - nearest)
    if tail > ctx.mpf("1e-10") or distance >= 0.25:
        raise PrecisionError(
            f"j at disc {order_disc}: distance {ctx.nstr(distance, 5)}, tail {ctx.nstr(tail, 5)}"
        )
    return int(nearest)
