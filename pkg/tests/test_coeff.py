from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrace.coeff import (
    HSeries,
    WindowError,
    format_rational,
    hs_add,
    hs_invert,
    hs_mul,
    parse_rational,
    vec_axpy,
    vec_series,
    vec_shift,
    vec_truncate,
)

h = HSeries.hbar


def series(terms, vmin=0, order=4):
    return HSeries(terms, vmin, order)


def test_add_cancels():
    assert (series({0: 1, 1: 1}) + series({1: -1})) == series({0: 1})


def test_add_zero_is_identity():
    a = series({0: 3, 2: Fraction(1, 2)})
    assert hs_add(series({}), a) == a


def test_laurent_doubling():
    a = HSeries({-1: 1}, vmin=-1, order=3)
    assert (a + a).terms == {-1: Fraction(2)}


def test_mul_difference_of_squares():
    a = series({0: 1, 1: 1}, order=2)
    b = series({0: 1, 1: -1}, order=2)
    assert hs_mul(a, b).terms == {0: 1, 2: -1}


def test_mul_inverse_powers():
    a = HSeries({-1: 1}, vmin=-1, order=3)
    assert (a * h(1, order=3)).terms == {0: 1}


def test_exp_times_exp_minus():
    # exp(h) and exp(-h) through h^4 by hand
    e = series({0: 1, 1: 1, 2: Fraction(1, 2), 3: Fraction(1, 6), 4: Fraction(1, 24)})
    em = series({0: 1, 1: -1, 2: Fraction(1, 2), 3: Fraction(-1, 6), 4: Fraction(1, 24)})
    assert (e * em).terms == {0: 1}


def test_invert_geometric():
    assert hs_invert(series({0: 1, 1: -1}, order=2)).terms == {0: 1, 1: 1, 2: 1}


def test_invert_constant():
    assert hs_invert(series({0: 2})).terms == {0: Fraction(1, 2)}


def test_invert_hbar_needs_laurent_floor():
    assert hs_invert(HSeries({1: 1}, vmin=-1, order=3)).terms == {-1: 1}
    with pytest.raises(WindowError):
        hs_invert(HSeries({1: 1}, vmin=0, order=3))


def test_invert_zero():
    with pytest.raises(ZeroDivisionError):
        hs_invert(series({}))


def test_window_underflow_is_reported():
    a = HSeries({-1: 1}, vmin=-1, order=3)
    with pytest.raises(WindowError):
        a * a


def test_window_validation():
    with pytest.raises(ValueError):
        HSeries({}, vmin=1)
    with pytest.raises(WindowError):
        HSeries({-2: 1}, vmin=-1)


def test_terms_above_order_are_dropped():
    assert series({0: 1, 7: 1}, order=3).terms == {0: 1}


@pytest.mark.parametrize("text,value", [("1/2", Fraction(1, 2)), ("-3", Fraction(-3)), ("4/8", Fraction(1, 2)), (5, Fraction(5))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_rational_canonical_form():
    q = Fraction(6, -4)
    assert (q.numerator, q.denominator) == (-3, 2)
    assert format_rational(Fraction(0)) == "0/1"


def test_json_roundtrip_and_layout():
    a = HSeries({2: Fraction(-1, 3), 0: 1}, vmin=-1, order=5)
    data = a.to_json()
    assert data == {"terms": [[0, "1/1"], [2, "-1/3"]], "vmin": -1, "order": 5}
    assert HSeries.from_json(data) == a


def test_vec_helpers():
    acc = {(0, "a"): Fraction(1)}
    vec_axpy(acc, {(0, "a"): 1, (1, "b"): 2}, -1)
    assert acc == {(1, "b"): -2}
    assert vec_shift(acc, 2) == {(3, "b"): -2}
    assert vec_truncate({(0, "a"): 1, (3, "a"): 1}, 2) == {(0, "a"): 1}
    assert vec_series({(0, "a"): 1, (2, "a"): 5, (1, "b"): 1}, "a").terms == {0: 1, 2: 5}


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
orders = st.integers(min_value=0, max_value=4)


@st.composite
def hseries(draw, order=4):
    terms = draw(st.dictionaries(st.integers(min_value=0, max_value=order), coeffs, max_size=4))
    return HSeries(terms, 0, order)


@settings(max_examples=200, deadline=None)
@given(hseries(), hseries(), hseries())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)


@settings(max_examples=100, deadline=None)
@given(hseries(), st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(lambda q: q != 0))
def test_invert_roundtrip(a, lead):
    unit = a + HSeries({0: lead - a.coefficient(0)}, 0, a.order)
    assert unit * hs_invert(unit) == HSeries.const(1, order=a.order)
