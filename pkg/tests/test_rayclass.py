import pytest

from cmrt.arith import is_fundamental_discriminant, is_prime
from cmrt.errors import DomainError
from cmrt.fields import make_field
from cmrt.rayclass import (
    SplitType,
    general_formula,
    ray_class_number,
    residue_unit_order_oracle,
    split_type,
    unit_index,
    unit_index_oracle,
)

FUNDAMENTAL = [d for d in range(-3, -201, -1) if is_fundamental_discriminant(d)]
ODD_PRIMES = [p for p in range(3, 51) if is_prime(p)]


@pytest.mark.parametrize(
    "d_K, ell, st",
    [(-7, 7, SplitType.RAMIFIED), (-4, 5, SplitType.SPLIT), (-3, 5, SplitType.INERT)],
)
def test_split_type(d_K, ell, st):
    assert split_type(d_K, ell) is st


@pytest.mark.parametrize("d_K, ell, idx", [(-7, 5, 2), (-4, 5, 4), (-3, 7, 6), (-8, 3, 2), (-4, 3, 4)])
def test_unit_index(d_K, ell, idx):
    field = make_field(d_K)
    assert unit_index(field, ell) == idx
    assert unit_index_oracle(field, ell) == idx


@pytest.mark.parametrize("d_K, ell, h_m", [(-163, 163, 13203), (-4, 5, 4), (-3, 5, 4)])
def test_ray_class_number_examples(d_K, ell, h_m):
    assert ray_class_number(d_K, ell).h_m == h_m
    assert general_formula(d_K, ell) == h_m


@pytest.mark.parametrize("d_K, ell, n", [(-4, 5, 16), (-3, 5, 24), (-7, 7, 42)])
def test_residue_oracle_examples(d_K, ell, n, backend):
    assert residue_unit_order_oracle(d_K, ell, backend=backend) == n


@pytest.mark.parametrize("ell", [2, 1, 9, 0, -3])
def test_rejects_non_odd_prime(ell):
    with pytest.raises(DomainError, match="ell must be an odd prime"):
        ray_class_number(-4, ell)
    with pytest.raises(DomainError):
        split_type(-4, ell)


def test_rejects_non_fundamental():
    with pytest.raises(DomainError):
        split_type(-12, 5)


def test_report_invariants_and_growth():
    for d_K in FUNDAMENTAL:
        field = make_field(d_K)
        for ell in ODD_PRIMES:
            r = ray_class_number(field, ell)
            assert r.h_m * r.unit_index == field.h_K * r.residue_unit_order
            assert r.residue_unit_order == {
                SplitType.SPLIT: (ell - 1) ** 2,
                SplitType.INERT: ell * ell - 1,
                SplitType.RAMIFIED: ell * ell - ell,
            }[r.split_type]
            assert general_formula(field, ell) == r.h_m
            if d_K % ell:
                # h_m >= (ell - 1)^2 / w_K
                assert r.h_m * field.w_K >= (ell - 1) ** 2
