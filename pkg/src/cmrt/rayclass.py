"""Orders of ray class groups of an imaginary quadratic field for the modulus
``ell * O_K`` with ``ell`` an odd prime.

Three routes to the same number are kept side by side: the closed form by
splitting type (:func:`ray_class_number`), the general product over primes
dividing the modulus (:func:`general_formula`), and brute-force enumeration
of units and residues (the ``*_oracle`` functions).
"""

import enum
from dataclasses import dataclass
from fractions import Fraction

from cmrt import kernels
from cmrt.arith import is_fundamental_discriminant, kronecker, require_odd_prime
from cmrt.errors import ConsistencyError, DomainError
from cmrt.fields import QuadField, make_field, norm_form

__all__ = [
    "RayClassReport",
    "SplitType",
    "general_formula",
    "ray_class_number",
    "residue_unit_order",
    "residue_unit_order_oracle",
    "split_type",
    "unit_index",
    "unit_index_oracle",
]


class SplitType(enum.Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"


@dataclass(frozen=True)
class RayClassReport:
    field: QuadField
    ell: int
    split_type: SplitType
    unit_index: int
    residue_unit_order: int
    h_m: int

    def as_dict(self) -> dict:
        return {
            "d_K": self.field.d_K,
            "h_K": self.field.h_K,
            "w_K": self.field.w_K,
            "ell": self.ell,
            "split_type": self.split_type.value,
            "unit_index": self.unit_index,
            "residue_unit_order": self.residue_unit_order,
            "h_m": self.h_m,
        }


def _check(d_K: int, ell: int) -> None:
    require_odd_prime(ell)
    if not is_fundamental_discriminant(d_K):
        raise DomainError(f"{d_K} is not a fundamental discriminant")


def split_type(d_K: int, ell: int) -> SplitType:
    _check(d_K, ell)
    return {1: SplitType.SPLIT, -1: SplitType.INERT, 0: SplitType.RAMIFIED}[kronecker(d_K, ell)]


def residue_unit_order(d_K: int, ell: int) -> int:
    """|(O_K / ell O_K)^x| from the splitting type."""
    st = split_type(d_K, ell)
    if st is SplitType.SPLIT:
        return (ell - 1) ** 2
    if st is SplitType.INERT:
        return ell * ell - 1
    return ell * ell - ell


def unit_index(field: QuadField, ell: int) -> int:
    """[U : U_m] for m = ell O_K.

    For odd ell no root of unity other than 1 is congruent to 1 mod ell, so
    the index is the full unit count w_K.
    """
    _check(field.d_K, ell)
    return field.w_K


def _roots_of_unity(d_K: int) -> list[tuple[int, int]]:
    p, q = norm_form(d_K)
    return [
        (x, y)
        for x in range(-2, 3)
        for y in range(-2, 3)
        if x * x + p * x * y + q * y * y == 1
    ]


def unit_index_oracle(field: QuadField, ell: int) -> int:
    """[U : U_m] by listing units ``x + y*w`` and testing ``x = 1, y = 0 mod ell``."""
    _check(field.d_K, ell)
    units = _roots_of_unity(field.d_K)
    if len(units) != field.w_K:
        raise ConsistencyError(f"found {len(units)} units for d_K={field.d_K}, expected {field.w_K}")
    congruent = sum(1 for x, y in units if (x - 1) % ell == 0 and y % ell == 0)
    return len(units) // congruent


def residue_unit_order_oracle(d_K: int, ell: int, backend=None) -> int:
    """Count the ell^2 residues mod ell O_K whose norm is prime to ell."""
    _check(d_K, ell)
    p, q = norm_form(d_K)
    return kernels.residue_unit_count(p, q, ell, backend=backend)


def _exact(num: int, den: int, what: str) -> int:
    h, rem = divmod(num, den)
    if rem:
        raise ConsistencyError(f"{what}: {num}/{den} is not integral")
    return h


def ray_class_number(field: QuadField | int, ell: int) -> RayClassReport:
    """h_m = h_K * |(O_K/m)^x| / [U : U_m] for m = ell O_K."""
    if isinstance(field, int):
        field = make_field(field)
    st = split_type(field.d_K, ell)
    units = unit_index(field, ell)
    residues = residue_unit_order(field.d_K, ell)
    h_m = _exact(field.h_K * residues, units, f"h_m for d_K={field.d_K}, ell={ell}")
    return RayClassReport(
        field=field,
        ell=ell,
        split_type=st,
        unit_index=units,
        residue_unit_order=residues,
        h_m=h_m,
    )


def general_formula(field: QuadField | int, ell: int) -> int:
    """h_m = h_K [U:U_m]^-1 N(m) prod_{p | m} (1 - 1/N(p)), evaluated exactly.

    The primes above ell are read off the splitting type: two of norm ell,
    one of norm ell^2, or one of norm ell (squared).
    """
    if isinstance(field, int):
        field = make_field(field)
    st = split_type(field.d_K, ell)
    prime_norms = {
        SplitType.SPLIT: (ell, ell),
        SplitType.INERT: (ell * ell,),
        SplitType.RAMIFIED: (ell,),
    }[st]
    value = Fraction(field.h_K, unit_index(field, ell)) * ell * ell
    for norm in prime_norms:
        value *= 1 - Fraction(1, norm)
    if value.denominator != 1:
        raise ConsistencyError(f"general ray class formula gave {value} for d_K={field.d_K}, ell={ell}")
    return value.numerator
