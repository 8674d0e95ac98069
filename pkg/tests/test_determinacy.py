import pytest

from helpers import P, disguise
from singclass.classify import classify_contact
from singclass.determinacy import contact_determinacy_bound, determinacy_ideal, right_determinacy_bound
from singclass.errors import NotIsolated, OrderTooSmall
from singclass.stdbasis import contains_m_power

F_EX = "y^8+x^8*y^4+x^23"


def test_example_contact_readings():
    b3 = contact_determinacy_bound(P(F_EX, 3))
    assert (b3.highcorner.exponents, b3.example_reading) == ((22, 2), 40)
    b2 = contact_determinacy_bound(P(F_EX, 2))
    assert (b2.highcorner.exponents, b2.example_reading) == ((21, 7), 48)


def test_example_right_readings():
    b3 = right_determinacy_bound(P(F_EX, 3))
    assert b3.highcorner.exponents == (29, 2) and b3.example_reading == 56 and b3.char0 is None
    b0 = right_determinacy_bound(P(F_EX, 0))
    assert b0.highcorner.exponents == (29, 2) and b0.char0 == 31


def test_bound_reading_is_one_above_example_reading_for_contact():
    b = contact_determinacy_bound(P(F_EX, 3))
    assert b.general == 2 * b.k_star - b.order + 2
    assert b.k_star == b.highcorner.degree - 1


def test_ideal_containment_example():
    f = P("y^2 + x^3*y", 2)
    J = determinacy_ideal(f, 8, contact=True)
    assert contains_m_power(J, 5, 8) and not contains_m_power(J, 4, 8)


def test_bounds_never_below_order():
    b = right_determinacy_bound(P("x^2 + y^2", 0))
    assert b.best >= 2 and b.order == 2


def test_right_bound_needs_finite_mu():
    with pytest.raises(NotIsolated):
        right_determinacy_bound(P("x^3 + y^2", 3))
    assert contact_determinacy_bound(P("x^3 + y^2", 3)).best >= 2


def test_order_one_rejected():
    with pytest.raises(OrderTooSmall):
        contact_determinacy_bound(P("x + y^2", 0))


@pytest.mark.parametrize("text,p", [("x^2+y^5", 0), ("x^3+y^4", 7), ("x^2*y+y^4", 5)])
def test_noise_beyond_bound_keeps_the_type(text, p):
    f = P(text, p)
    want = classify_contact(f)
    for s in range(5):
        assert classify_contact(disguise(f, s)) == want
