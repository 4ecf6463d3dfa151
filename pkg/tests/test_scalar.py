from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gerst.errors import InputError, UnresolvableError
from gerst.scalar import (Character, Scalar, TrivialityOracle, char_mul, format_scalar,
                          is_trivial_on_lattice, log_derivative, parse_scalar, unitary_part)

fractions = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 12))
scalars = st.builds(Scalar, fractions, fractions)


def chars(n=2):
    return st.builds(Character, st.lists(scalars, min_size=n, max_size=n),
                     st.lists(scalars, min_size=n, max_size=n))


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(scalars)
def test_scalar_format_round_trip(a):
    assert parse_scalar(format_scalar(a)) == a


def test_scalar_normalization():
    s = Scalar(Fraction(2, -4), Fraction(6, 8))
    assert s.re.denominator == 2 and s.re.numerator == -1
    assert s.im == Fraction(3, 4)


@pytest.mark.parametrize("text,expected", [
    ("1/2+3/4 i", Scalar(Fraction(1, 2), Fraction(3, 4))),
    ("i", Scalar(0, 1)),
    ("-i", Scalar(0, -1)),
    ("-3", Scalar(-3)),
    ("2-i", Scalar(2, -1)),
])
def test_parse_scalar(text, expected):
    assert parse_scalar(text) == expected


def test_parse_scalar_rejects_floats():
    with pytest.raises(InputError):
        parse_scalar("0.5")


def test_char_mul_identity_and_inverse_pair():
    a = Character([1, 0], [0, 2])
    assert char_mul(a, Character.identity(2)) == a
    ez = Character([1], [0])
    assert char_mul(ez, Character([-1], [0])).is_identity()


def test_char_mul_adds_real_weights():
    half = Fraction(1, 2)
    e1 = Character([half], [half])
    e2 = Character([2 * half], [2 * half])
    assert char_mul(e1, e2) == Character([3 * half], [3 * half])


def test_char_mul_dimension_mismatch():
    with pytest.raises(InputError):
        char_mul(Character([1], [0]), Character([1, 0], [0, 0]))


@given(chars(), chars(), chars())
def test_character_group_law(a, b, c):
    assert char_mul(char_mul(a, b), c) == char_mul(a, char_mul(b, c))
    assert char_mul(a, b) == char_mul(b, a)
    assert char_mul(a, a.inverse()).is_identity()


def test_unitary_part_of_holomorphic_is_identity():
    assert unitary_part(Character([3, 1], [0, 0])).is_identity()


def test_unitary_part_of_real_exponential():
    # exp(k x) = exp(k z / 2 + k zbar / 2) has unitary part exp(-i k y)
    k = Fraction(1)
    beta = unitary_part(Character([k / 2], [k / 2]))
    assert beta == Character([-k / 2], [k / 2])
    assert beta.is_unitary()


@given(chars())
def test_unitary_part_properties(c):
    beta = unitary_part(c)
    assert beta.is_unitary()
    assert char_mul(c, beta.inverse()).is_holomorphic()
    gamma = unitary_part(c.conj())
    assert char_mul(c.conj(), gamma.inverse()).is_holomorphic()


@given(chars(), chars())
def test_unitary_part_is_homomorphism(a, b):
    assert unitary_part(char_mul(a, b)) == char_mul(unitary_part(a), unitary_part(b))


def test_log_derivative_examples():
    assert log_derivative(Character.identity(2), 1) == 0
    assert log_derivative(Character([1], [0]), 0) == 1
    half = Fraction(1, 2)
    assert log_derivative(Character([half], [half]), 0) == half
    assert log_derivative(Character([half], [Fraction(3)]), 0, conjugated=True) == 3
    with pytest.raises(InputError):
        log_derivative(Character([1], [0]), 1)


@given(chars(), chars(), st.integers(0, 1), st.booleans())
def test_log_derivative_additive(a, b, k, conj):
    assert log_derivative(char_mul(a, b), k, conj) == log_derivative(a, k, conj) + log_derivative(b, k, conj)


def nakamura_oracle(special: bool):
    gen = Character([-1], [1])  # exp(zbar - z), unitary
    return TrivialityOracle("sublattice", [gen], [[1]] if special else [], n=1)


def test_oracle_identity_is_trivial():
    assert is_trivial_on_lattice(Character.identity(1), nakamura_oracle(False))


def test_oracle_nakamura_cases():
    gen = Character([-1], [1])
    assert not nakamura_oracle(False).is_trivial(gen)
    assert not nakamura_oracle(False).is_trivial(gen ** 2)
    assert nakamura_oracle(True).is_trivial(gen)
    assert nakamura_oracle(True).is_trivial(gen ** -3)


def test_oracle_refuses_to_guess():
    with pytest.raises(UnresolvableError):
        nakamura_oracle(False).is_trivial(Character([1], [0]))
    with pytest.raises(UnresolvableError):
        nakamura_oracle(False).is_trivial(Character([Fraction(-1, 2)], [Fraction(1, 2)]))


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_oracle_closed_under_group_law(u, v):
    g1, g2 = Character([1, 0], [0, 0]), Character([0, -1], [0, 1])
    o = TrivialityOracle("sublattice", [g1, g2], [[2, 0], [0, 3]], n=2)

    def ch(e):
        return char_mul(g1 ** e[0], g2 ** e[1])

    if o.is_trivial(ch(u)) and o.is_trivial(ch(v)):
        assert o.is_trivial(char_mul(ch(u), ch(v)))
        assert o.is_trivial(ch(u).inverse())
    assert o.is_trivial(ch(u)) == (u[0] % 2 == 0 and u[1] % 3 == 0)


def test_rule_table_oracle():
    c = Character([-1], [1])
    o = TrivialityOracle("rule-table", rules=[(c, True)], n=1)
    assert o.is_trivial(c) and o.is_trivial(c.inverse())
    with pytest.raises(UnresolvableError):
        o.is_trivial(c ** 2)
