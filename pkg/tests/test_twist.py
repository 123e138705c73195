from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrace.hopfalgd import bialgebra_model, weyl_model
from hopfbrace.reporting import sample_rng
from hopfbrace.suites import suite_two_types, suite_twistor
from hopfbrace.twist import (
    TwistedAlgebroid,
    check_twistor,
    exponential_twistor,
    first_order,
    trivial_twistor,
    verify_two_types,
)


@pytest.fixture(scope="module")
def weyl2():
    W = weyl_model(2, order=4)
    return W, TwistedAlgebroid(W, exponential_twistor(W, 0, 1))


def test_first_order():
    assert first_order({}) is None
    assert first_order({(2, "a"): 1, (1, "b"): 3}) == 1


@pytest.mark.parametrize("H", [weyl_model(1, order=3), bialgebra_model("prim", d=1, order=3)], ids=["weyl1", "prim"])
def test_trivial_twistor(H):
    assert check_twistor(H, trivial_twistor(H)).ok


@pytest.mark.parametrize("d,i,j", [(1, 0, 0), (2, 0, 1), (2, 1, 1)])
def test_exponential_twistor(d, i, j):
    W = weyl_model(d, order=5)
    assert check_twistor(W, exponential_twistor(W, i, j)).ok


def test_exponential_coefficients():
    W = weyl_model(1, order=4)
    F = exponential_twistor(W, 0, 0)
    assert [F[k] for k in sorted(F)] == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]


def test_truncated_exponential_breaks_at_second_order():
    W = weyl_model(2, order=4)
    G = {k: c for k, c in exponential_twistor(W, 0, 1).items() if k[0] < 2}
    v = check_twistor(W, G)
    assert (v["twistor_order"], v["counit_order"]) == (2, None)
    with pytest.raises(ValueError):
        TwistedAlgebroid(W, G)


def test_counit_failure_reported():
    # 1 (x) 1 + hbar x (x) 1: eps(x) = 0 but x eps(1) = x
    P = bialgebra_model("prim", d=1, order=3)
    F = {(0, ((0,), (0,))): Fraction(1), (1, ((1,), (0,))): Fraction(1)}
    v = check_twistor(P, F)
    assert not v.ok
    assert v["counit_order"] == 1
    assert v["counit_residual"]["right"] == {(1, (1,)): 1}
    assert v["counit_residual"]["left"] == {}


def test_star_product(weyl2):
    W, TA = weyl2
    assert TA.star(W.fn((1, 0)), W.fn((0, 1))) == {**W.fn((1, 1)), **W.fn((0, 0), v=1)}
    assert TA.star(W.fn((0, 1)), W.fn((1, 0))) == W.fn((1, 1))


def test_star_weyl1():
    W = weyl_model(1, order=3)
    TA = TwistedAlgebroid(W, exponential_twistor(W, 0, 0))
    # lambda^2 * lambda + hbar (2 lambda)(1)
    assert TA.star(W.fn((2,)), W.fn((1,))) == {**W.fn((3,)), **W.fn((1,), 2, v=1)}


def test_fsharp_of_units(weyl2):
    W, TA = weyl2
    assert TA.fsharp(TA.unit_lift(2), 2) == TA.F
    assert TA.fsharp(TA.unit_lift(1), 1) == W.tp1(W.h_unit())


def test_trivial_twist_fsharp_is_identity():
    W = weyl_model(2, order=2)
    TA = TwistedAlgebroid(W, trivial_twistor(W))
    for t in range(10):
        rng = sample_rng(3, t)
        n = 1 + t % 3
        u = TA.sample_lift(rng, n, 2)
        assert TA.fsharp(u, n) == W.truncate(W.pack(u))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 2))
def test_fsharp_roundtrip(weyl2, seed, n):
    W, TA = weyl2
    u = W.sample_tp(sample_rng(seed, 0, "rt"), n, 2)
    assert TA.fsharp(TA.fsharp_inverse(u, n), n) == W.truncate(u)


def test_two_types_agree(weyl2):
    W = weyl_model(2, order=2)
    TA = TwistedAlgebroid(W, exponential_twistor(W, 0, 1))
    rep = verify_two_types(TA, trials=10, seed=4, size=1)
    assert rep.ok, rep.summary()


def test_suites():
    assert suite_twistor("weyl2", order=3).ok
    assert suite_two_types("weyl1", order=2, trials=5).ok


def test_fsharp_inverse_mutation_is_caught():
    rep = suite_two_types("weyl2", order=2, trials=10, mutation="fsharp_inverse")
    assert not rep.ok
