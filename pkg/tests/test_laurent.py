import pytest
from hypothesis import given, strategies as st

from vkt.laurent import A, D, ONE, ZERO, LaurentPoly, add, d_power, jones_display, mul, poly_sum

polys = st.dictionaries(st.integers(-20, 20), st.integers(-50, 50), max_size=6).map(LaurentPoly)


def test_add_examples():
    assert add(LaurentPoly.monomial(2), LaurentPoly.monomial(2, -1)).terms == {}
    assert add(D, D) == LaurentPoly({-2: -2, 2: -2})
    assert add(ONE, LaurentPoly({4: 1, 0: -1})) == LaurentPoly.monomial(4)


def test_mul_examples():
    assert mul(D, D) == LaurentPoly({-4: 1, 0: 2, 4: 1})
    assert mul(LaurentPoly.monomial(3, -1), LaurentPoly.monomial(-3, -1)) == ONE
    assert A * D + LaurentPoly.monomial(-1) == LaurentPoly.monomial(3, -1)


def test_d_power():
    assert d_power(0) == ONE
    assert d_power(1) == LaurentPoly({-2: -1, 2: -1})
    assert d_power(2) == LaurentPoly({-4: 1, 0: 2, 4: 1})
    with pytest.raises(ValueError):
        d_power(-1)


def test_no_zero_coefficients_stored():
    p = LaurentPoly({1: 0, 2: 3})
    assert p.terms == {2: 3}


def test_big_coefficients_exact():
    p = LaurentPoly.constant(10**40) * LaurentPoly.constant(10**40)
    assert p.coeff(0) == 10**80


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p * ONE == p
    assert p + ZERO == p


@given(polys)
def test_div_d_inverts_mul(p):
    assert (p * D).div_d() == p


def test_div_d_inexact():
    with pytest.raises(ValueError):
        ONE.div_d()


@given(polys)
def test_text_round_trip(p):
    assert LaurentPoly.parse(str(p)) == p
    assert LaurentPoly.from_json(p.to_json()) == p


def test_canonical_text():
    assert str(D) == "-A^-2 - A^2"
    assert str(ZERO) == "0"
    assert str(LaurentPoly({0: 3, 1: -2})) == "3 - 2A^1"
    assert D.to_json() == {"-2": "-1", "2": "-1"}


def test_mirror_and_shift():
    p = LaurentPoly({-3: 2, 5: 1})
    assert p.mirror() == LaurentPoly({3: 2, -5: 1})
    assert p.shift(2) == LaurentPoly({-1: 2, 7: 1})


def test_negative_power_only_for_units():
    assert LaurentPoly.monomial(3, -1) ** -1 == LaurentPoly.monomial(-3, -1)
    with pytest.raises(ValueError):
        D ** -1


def test_jones_display():
    assert jones_display(LaurentPoly({-4: 1, 0: -1})) == "-1t^0 +1t^1"
    with pytest.raises(ValueError):
        jones_display(A)


def test_poly_sum():
    assert poly_sum([A, A, D]) == LaurentPoly({1: 2, -2: -1, 2: -1})
