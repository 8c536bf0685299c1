from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fanoverify.errors import DivisionByZero
from fanoverify.field import FieldSpec, field_arith, is_prime


def test_small_primes():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec(6)


@pytest.mark.parametrize("text,p", [("Q", 0), ("F5", 5), ("Fp5", 5), ("GF(7)", 7), ("F101", 101)])
def test_parse(text, p):
    assert FieldSpec.parse(text).p == p


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        FieldSpec.parse("R")


def test_known_values():
    F7, F5 = FieldSpec(7), FieldSpec(5)
    assert F7.inv(3) == 5
    assert F5.add(2, 3) == 0
    assert FieldSpec(0).mul(Fraction(2, 3), Fraction(3, 4)) == Fraction(1, 2)
    assert field_arith(F7, "inv", 3) == 5
    with pytest.raises(ValueError):
        field_arith(F7, "pow", 1, 3)


def test_inverse_of_zero(field):
    with pytest.raises(DivisionByZero):
        field.inv(field.zero)


def test_inverse_of_zero_is_zero_division_error():
    with pytest.raises(ZeroDivisionError):
        FieldSpec(5).div(1, 0)


def test_json_round_trip(field):
    assert FieldSpec.from_json(field.to_json()) == field
    for x in list(field.elements())[:5]:
        assert field.parse_element(field.format_element(x)) == x


@given(st.integers(-50, 50), st.integers(-50, 50), st.sampled_from([0, 2, 3, 5, 101]))
def test_field_axioms(a, b, p):
    F = FieldSpec(p)
    x, y = F(a), F(b)
    assert F.add(x, y) == F.add(y, x)
    assert F.sub(F.add(x, y), y) == x
    if y != 0:
        assert F.mul(F.div(x, y), y) == x
    assert F.add(x, F.neg(x)) == 0
