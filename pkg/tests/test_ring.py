import random

import pytest
from gmpy2 import mpq

from helpers import P, random_poly
from singclass.errors import (
    DivisionByZeroInCoefficient,
    FieldMismatch,
    NonInvertibleLinearPart,
    NonPrimeCharacteristic,
    PolySyntaxError,
    UnknownVariable,
)
from singclass.ring import (
    FieldSpec,
    JetAutomorphism,
    Monomial,
    Polynomial,
    compose,
    gradient,
    parse_poly,
    random_automorphism,
    substitute_jet,
)


@pytest.mark.parametrize("p", [0, 2, 3, 5, 7, 101])
def test_fieldspec_accepts_zero_and_primes(p):
    assert FieldSpec(p).characteristic == p


@pytest.mark.parametrize("p", [1, 4, 9, -3])
def test_fieldspec_rejects_non_primes(p):
    with pytest.raises(NonPrimeCharacteristic):
        FieldSpec(p)


def test_field_normalization():
    assert FieldSpec(5)(-1) == 4
    assert FieldSpec(5)("1/2") == 3
    assert FieldSpec(0)("3/6") == mpq(1, 2)
    with pytest.raises(DivisionByZeroInCoefficient):
        FieldSpec(3)("1/3")


def test_local_ordering_prefers_low_degree():
    one, x, x2 = Monomial((0, 0)), Monomial((1, 0)), Monomial((2, 0))
    assert one > x > x2
    assert Monomial((1, 0)) > Monomial((0, 1))  # x > y within a degree


def test_parse_and_format_round_trip():
    f = P("y^2 + x^3*y - 2*x^2 + 1/2*x*y", 0)
    assert P(f.format(["x", "y"]), 0) == f
    assert f.order() == 2 and f.degree() == 4


def test_parse_singular_shorthand():
    assert P("x2y3", 0) == P("x^2*y^3", 0)


def test_parse_multi_letter_names():
    f = parse_poly("x1^2*x2 + x2^3", FieldSpec(0), ["x1", "x2"])
    assert f.degree() == 3 and len(f) == 2


def test_parse_reduces_mod_p():
    assert P("3*x^2 + 2*y^2", 3) == P("2*y^2", 3)
    assert P("x^2 - x^2", 5).is_zero()


@pytest.mark.parametrize("text", ["x^2+(y", "x^", "x**", "2*", "x^2 y^2 $"])
def test_parse_errors(text):
    with pytest.raises(PolySyntaxError):
        P(text, 0)


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable):
        P("x + w", 0)


def test_fraction_only_in_char_zero():
    with pytest.raises(PolySyntaxError):
        P("1/2*x", 3)


def test_arithmetic_is_exact():
    f, g = P("x + y", 0), P("x - y", 0)
    assert f * g == P("x^2 - y^2", 0)
    assert (f + g) ** 2 == P("4*x^2", 0)
    assert P("x+y", 2) ** 2 == P("x^2+y^2", 2)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        P("x", 0) + P("x", 3)


def test_gradient():
    assert gradient(P("x^3 + x*y^2", 0)) == [P("3*x^2 + y^2", 0), P("2*x*y", 0)]
    assert gradient(P("x^2 + y^3", 2)) == [P("0", 2), P("y^2", 2)]


def test_substitution_truncates():
    fld = FieldSpec(0)
    phi = JetAutomorphism((P("x + y^2", 0), P("y", 0)), 3)
    assert substitute_jet(P("x^2", 0), phi) == P("x^2 + 2*x*y^2", 0)
    assert substitute_jet(P("x^2", 0), JetAutomorphism.identity(fld, 2, 1)).is_zero()


def test_unit_multiplies():
    phi = JetAutomorphism((P("x", 0), P("y", 0)), 4, P("1 + x", 0))
    assert substitute_jet(P("y^2", 0), phi) == P("y^2 + x*y^2", 0)


def test_singular_linear_part_rejected():
    with pytest.raises(NonInvertibleLinearPart):
        JetAutomorphism((P("x + y", 0), P("x + y", 0)), 3)
    with pytest.raises(NonInvertibleLinearPart):
        JetAutomorphism((P("x", 0), P("y", 0)), 3, P("x", 0))


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_composition_is_associative_on_jets(p):
    fld = FieldSpec(p)
    rng = random.Random(p)
    for seed in range(10):
        n = rng.randint(1, 3)
        f = random_poly(fld, n, rng, 2, 5)
        a = random_automorphism(n, fld, 6, seed, contact=True)
        b = random_automorphism(n, fld, 6, seed + 100, contact=True)
        assert substitute_jet(substitute_jet(f, a), b) == substitute_jet(f, compose(b, a))


def test_random_automorphism_is_seeded():
    fld = FieldSpec(3)
    assert random_automorphism(2, fld, 5, 42) == random_automorphism(2, fld, 5, 42)


def test_polynomial_hash_and_equality():
    assert hash(P("x+y", 5)) == hash(P("y+x", 5))
    assert Polynomial.zero(FieldSpec(0), 2).is_zero()
