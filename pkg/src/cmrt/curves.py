"""Exact arithmetic on short Weierstrass curves y^2 = x^3 + a x + b over Q:
invariants, the Weber function, CM identification for rational j, and the
degree/divisibility criteria for CM curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

from cmrt.arith import factorize, fundamental_part, is_discriminant, is_squarefree, kronecker, require_odd_prime
from cmrt.errors import DomainError
from cmrt.fields import QuadField, make_field
from cmrt.forms import class_number
from cmrt.jfunction import cm_j_value

__all__ = [
    "CmIdentification",
    "CurvePoint",
    "CurveReport",
    "QuadraticSurd",
    "Verdict",
    "WeierstrassCurve",
    "class_number_one_discriminants",
    "identify_cm",
    "inspect_curve",
    "j_invariant",
    "odd_degree_condition",
    "necessary_condition",
    "torsion_field_degree_divisor",
    "two_torsion_points",
    "weber",
    "weber_model_independence_check",
]


@dataclass(frozen=True)
class QuadraticSurd:
    """``p + q*sqrt(m)`` with rational p, q and squarefree m != 1."""

    p: Fraction
    q: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.m in (0, 1) or not is_squarefree(self.m):
            raise DomainError(f"radicand must be squarefree and not 0 or 1, got {self.m}")

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.m != self.m:
                raise DomainError(f"cannot combine sqrt({self.m}) with sqrt({other.m})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd(Fraction(other), Fraction(0), self.m)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticSurd(self.p + o.p, self.q + o.q, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.q, self.m)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticSurd(
            self.p * o.p + self.m * self.q * o.q, self.p * o.q + self.q * o.p, self.m
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = QuadraticSurd(Fraction(1), Fraction(0), self.m)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        if isinstance(other, QuadraticSurd):
            if self.q == 0 and other.q == 0:
                return self.p == other.p
            return (self.p, self.q, self.m) == (other.p, other.q, other.m)
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.m))

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        return f"{self.p} + {self.q}*sqrt({self.m})"


Exact = Union[Fraction, QuadraticSurd]


def _rational(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass int, Fraction or a 'p/q' string")
    return Fraction(value)


@dataclass(frozen=True)
class WeierstrassCurve:
    """``y^2 = x^3 + a x + b``, with ``g2 = -4a`` and ``g3 = -4b``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _rational(self.a))
        object.__setattr__(self, "b", _rational(self.b))
        if 4 * self.a**3 + 27 * self.b**2 == 0:
            raise DomainError(f"singular curve: 4a^3 + 27b^2 = 0 for a={self.a}, b={self.b}")

    @property
    def g2(self) -> Fraction:
        return -4 * self.a

    @property
    def g3(self) -> Fraction:
        return -4 * self.b

    @property
    def delta(self) -> Fraction:
        return self.g2**3 - 27 * self.g3**2

    @property
    def j(self) -> Fraction:
        return 1728 * self.g2**3 / self.delta

    def twist(self, u) -> WeierstrassCurve:
        """The model ``(u^4 a, u^6 b)``, isomorphic via ``(x, y) -> (u^2 x, u^3 y)``."""
        u = _rational(u)
        return WeierstrassCurve(u**4 * self.a, u**6 * self.b)

    def rhs(self, x):
        return x**3 + self.a * x + self.b

    def __str__(self):
        return f"y^2 = x^3 + ({self.a})x + ({self.b})"


@dataclass(frozen=True)
class CurvePoint:
    x: Exact
    y: Exact

    def __post_init__(self):
        for name in ("x", "y"):
            v = getattr(self, name)
            if not isinstance(v, QuadraticSurd):
                object.__setattr__(self, name, _rational(v))


def _on_curve(curve: WeierstrassCurve, p: CurvePoint) -> bool:
    try:
        return p.y**2 == curve.rhs(p.x)
    except DomainError:
        # coordinates from two different quadratic fields; not checked
        return True


def j_invariant(a, b) -> Fraction:
    return WeierstrassCurve(a, b).j


def weber(curve: WeierstrassCurve, p: CurvePoint) -> Exact:
    """Weber function value at ``p``; the case is chosen by j.

    (g2 g3 / delta) x for j != 0, 1728; (g2^2 / delta) x^2 for j = 1728;
    (g3 / delta) x^3 for j = 0. The point at infinity is not representable.
    """
    if not _on_curve(curve, p):
        raise DomainError(f"point ({p.x}, {p.y}) is not on {curve}")
    if curve.g2 == 0:
        return curve.g3 / curve.delta * p.x**3
    if curve.g3 == 0:
        return curve.g2**2 / curve.delta * p.x**2
    return curve.g2 * curve.g3 / curve.delta * p.x


def weber_model_independence_check(curve: WeierstrassCurve, u, p: CurvePoint) -> bool:
    u = _rational(u)
    if u == 0:
        raise DomainError("twist parameter must be nonzero")
    moved = CurvePoint(u**2 * p.x, u**3 * p.y)
    return weber(curve, p) == weber(curve.twist(u), moved)


def _divisors(n: int) -> list[int]:
    divs = [1]
    for prime, e in factorize(n).factors:
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _integral_scale(curve: WeierstrassCurve) -> int:
    """Smallest u > 0 with u^4 a and u^6 b integral."""
    den = curve.a.denominator * curve.b.denominator
    for u in _divisors(den):
        if (u**4 * curve.a).denominator == 1 and (u**6 * curve.b).denominator == 1:
            return u
    return den  # pragma: no cover - den itself always works


def _sqrt_exact(r: Fraction) -> Exact:
    """sqrt(r) as a Fraction when r is a rational square, else as a QuadraticSurd."""
    if r == 0:
        return Fraction(0)
    num, den = r.numerator * r.denominator, r.denominator
    sign = -1 if num < 0 else 1
    square, free = 1, sign
    for prime, e in factorize(abs(num)).factors:
        square *= prime ** (e // 2)
        free *= prime ** (e % 2)
    coeff = Fraction(square, den)
    if free == 1:
        return coeff
    return QuadraticSurd(Fraction(0), coeff, free)


def two_torsion_points(curve: WeierstrassCurve) -> list[CurvePoint]:
    """Points (x, 0) for the roots of x^3 + ax + b that are rational or lie in
    one quadratic field. Rational roots come first, sorted; an irreducible
    cubic gives an empty list."""
    u = _integral_scale(curve)
    A = int(u**4 * curve.a)
    B = int(u**6 * curve.b)
    # a rational root of the monic integral cubic X^3 + A X + B is an integer dividing B
    if B == 0:
        found = 0
    else:
        found = next((s * d for d in _divisors(abs(B)) for s in (1, -1) if (s * d) ** 3 + A * s * d + B == 0), None)
    if found is None:
        return []
    r = Fraction(found, u * u)
    # x^3 + ax + b = (x - r)(x^2 + r x + r^2 + a)
    root = _sqrt_exact(-3 * r * r - 4 * curve.a)
    if isinstance(root, QuadraticSurd):
        return [CurvePoint(r, Fraction(0))] + [CurvePoint(-r / 2 + s * root * Fraction(1, 2), Fraction(0)) for s in (1, -1)]
    xs = sorted({r, -r / 2 + root / 2, -r / 2 - root / 2})
    points = [CurvePoint(x, Fraction(0)) for x in xs]
    return points


@dataclass(frozen=True)
class CmIdentification:
    d_K: int
    f: int
    order_disc: int

    def as_dict(self) -> dict:
        return {"d_K": self.d_K, "f": self.f, "order_disc": self.order_disc}


@lru_cache(maxsize=1)
def class_number_one_discriminants(limit: int = 200) -> tuple[int, ...]:
    """All negative discriminants d (fundamental or not) with |d| <= limit and h(d) = 1."""
    return tuple(d for d in range(-3, -limit - 1, -1) if is_discriminant(d) and class_number(d) == 1)


def identify_cm(j) -> CmIdentification | None:
    """Match a rational j against the j-invariants of class-number-one orders."""
    j = _rational(j)
    for d in class_number_one_discriminants():
        if cm_j_value(d) == j:
            d_K, f = fundamental_part(d)
            return CmIdentification(d_K=d_K, f=f, order_disc=d)
    return None


def torsion_field_degree_divisor(d_K: int, ell: int) -> int:
    """A multiple of [F(E[ell]) : F] for E with CM by O_K, by splitting of ell.

    2(ell-1)^2 split, 2(ell^2-1) inert, 2(ell^2-ell) ramified.
    """
    require_odd_prime(ell)
    k = kronecker(d_K, ell)
    if k == 1:
        return 2 * (ell - 1) ** 2
    if k == -1:
        return 2 * (ell * ell - 1)
    return 2 * (ell * ell - ell)


class Verdict(NamedTuple):
    """``possible`` is False only when an ell-powered [F(E[ell]):F(mu_ell)] is ruled out."""

    possible: bool
    reason: str


SIZE_CLAUSE = "ℓ ≤ (w_K/2)n + 1"
DIVIDES_CLAUSE = "ℓ | d_K"


def necessary_condition(n: int, field: QuadField | int, ell: int) -> Verdict:
    """An ell-powered [F(E[ell]) : F(mu_ell)] over a degree-n field F needs
    ell <= (w_K/2) n + 1 or ell | d_K."""
    require_odd_prime(ell)
    if n < 1:
        raise DomainError(f"degree must be positive, got {n}")
    if isinstance(field, int):
        field = make_field(field)
    small = ell <= (field.w_K // 2) * n + 1
    divides = field.d_K % ell == 0
    fired = [c for c, ok in ((SIZE_CLAUSE, small), (DIVIDES_CLAUSE, divides)) if ok]
    if fired:
        return Verdict(True, "; ".join(fired))
    return Verdict(False, "ℓ > (w_K/2)n + 1 and ℓ ∤ d_K")


def odd_degree_condition(n: int, field: QuadField | int, ell: int) -> Verdict:
    """Over a field of odd degree the size clause drops out: need ell | d_K."""
    require_odd_prime(ell)
    if n < 1 or n % 2 == 0:
        raise DomainError(f"degree must be odd and positive, got {n}")
    if isinstance(field, int):
        field = make_field(field)
    if field.d_K % ell == 0:
        return Verdict(True, DIVIDES_CLAUSE)
    return Verdict(False, "ℓ ∤ d_K")


NOT_DECIDED = (
    "whether [F(E[ℓ]):F(μ_ℓ)] is actually ℓ-powered is not decided here; "
    "the criterion is necessary only and torsion fields are not computed"
)


@dataclass(frozen=True)
class CurveReport:
    curve: WeierstrassCurve
    n: int
    ell: int | None
    cm: CmIdentification | None
    field: QuadField | None = None
    degree_divisor: int | None = None
    verdict: Verdict | None = None
    notes: tuple[str, ...] = ()

    @property
    def j(self) -> Fraction:
        return self.curve.j

    def as_dict(self) -> dict:
        return {
            "a": str(self.curve.a),
            "b": str(self.curve.b),
            "j": str(self.j),
            "degree": self.n,
            "ell": self.ell,
            "cm": self.cm.as_dict() if self.cm else None,
            "h_K": self.field.h_K if self.field else None,
            "w_K": self.field.w_K if self.field else None,
            "degree_divisor": self.degree_divisor,
            "necessary_condition": (
                {"possible": self.verdict.possible, "reason": self.verdict.reason} if self.verdict else None
            ),
            "notes": list(self.notes),
        }


def inspect_curve(a, b, n: int = 1, ell: int | None = None) -> CurveReport:
    curve = WeierstrassCurve(a, b)
    if ell is not None:
        require_odd_prime(ell)
    if n < 1:
        raise DomainError(f"degree must be positive, got {n}")
    cm = identify_cm(curve.j)
    if cm is None:
        return CurveReport(
            curve=curve,
            n=n,
            ell=ell,
            cm=None,
            notes=("no CM by a class-number-one order; CM criteria are inapplicable",),
        )
    fld = make_field(cm.d_K)
    notes = []
    if ell is None:
        return CurveReport(curve=curve, n=n, ell=None, cm=cm, field=fld,
                           notes=("pass ell to evaluate the criteria",))
    notes.append(NOT_DECIDED)
    if cm.f > 1:
        notes.append(f"CM order has conductor {cm.f}; divisor computed for the maximal order")
    return CurveReport(
        curve=curve,
        n=n,
        ell=ell,
        cm=cm,
        field=fld,
        degree_divisor=torsion_field_degree_divisor(cm.d_K, ell),
        verdict=necessary_condition(n, fld, ell),
        notes=tuple(notes),
    )
