import random
from fractions import Fraction

import pytest

from hopfbrace.coeff import WindowError, vec_sub
from hopfbrace.embed import (
    CMorphism,
    adt_twistor_equiv,
    c_twisted,
    check_embedding,
    dte_check,
    extend_twist,
    first_order_solutions,
    formal_to_algebraic,
    injectivity_check,
    sample_formal_twist,
    shift_third,
)
from hopfbrace.liepair import adte_check, aff1_pair, sl2_cartan_pair, unit_chain, valuation_check
from hopfbrace.qgroupoid import QuantumGroupoid
from hopfbrace.suites import suite_equiv, suite_mutation, twist_candidates

Y, X = 0, 1


@pytest.fixture(scope="module")
def Q():
    return QuantumGroupoid(aff1_pair(), order=2, slack=0)


@pytest.fixture(scope="module")
def cm(Q):
    return CMorphism(Q)


def trivial_F():
    return {(0, ((), (), ())): Fraction(1)}


def test_c0(Q, cm):
    assert cm.c({(0, ((),)): Fraction(1)}, 0) == Q.H.r_unit()
    # phi(hbar y) = lambda_y star, whose counit is lambda_y
    assert cm.c({(1, ((Y,),)): Fraction(1)}, 0) == Q.poly((1,))
    with pytest.raises(WindowError):
        cm.c({(0, ((Y,),)): Fraction(1)}, 0)


def test_c1_of_unit(Q, cm):
    assert cm.c(unit_chain(1), 1) == Q.H.tp1(Q.H.h_unit())


def test_c2_of_multiplication_is_theta_gutt(Q, cm):
    assert not Q.truncate(vec_sub(cm.c(unit_chain(2), 2), Q.theta_gutt()))


def test_trivial_twist_solves_dte(Q):
    assert dte_check(Q, trivial_F(), 2)["first_failure"] is None


def test_shift_expansion(Q):
    # F(lambda + hbar h_3) for F = lambda_y and F = lambda_y^2
    assert shift_third(Q, {(0, ((), (), (), (Y,))): Fraction(1)}, 2) == {
        (0, ((), (), (), (Y,))): 1,
        (1, ((), (), (Y,), ())): 1,
    }
    assert shift_third(Q, {(0, ((), (), (), (Y, Y))): Fraction(1)}, 2) == {
        (0, ((), (), (), (Y, Y))): 1,
        (1, ((), (), (Y,), (Y,))): 2,
        (2, ((), (), (Y, Y), ())): 1,
    }


def test_first_order_solutions(Q):
    sols = first_order_solutions(Q, max_len=2)
    assert {(0, ((Y,), (Y,), ())): 1} in sols
    for s in sols:
        F = sample_formal_twist(Q, random.Random(0), orders=(1,), fixed={1: s})
        assert dte_check(Q, F, 1)["first_failure"] is None


def test_extended_twist_passes_everything(Q, cm):
    base = {(0, ((Y,), (Y,), ())): Fraction(1)}
    F = sample_formal_twist(Q, random.Random(0), orders=(1,), fixed={1: base})
    F = extend_twist(Q, F, 2, max_len=4)
    assert F is not None
    assert dte_check(Q, F, 2)["first_failure"] is None
    K = formal_to_algebraic(Q.U, F)
    assert valuation_check(Q.U, K)[0]
    eq = adt_twistor_equiv(Q, K, cm=cm)
    assert eq == {"adte_first_failure": None, "twistor_first_failure": None, "counit_first_failure": None, "agree": True}
    rep = c_twisted(Q, K, trials=4, seed=1)
    assert rep.ok, rep.summary()


def test_dte_and_adte_verdicts_agree(Q):
    for cand in twist_candidates(Q, 9, seed=2):
        F = cand["F"]
        K = formal_to_algebraic(Q.U, F)
        assert dte_check(Q, F, 2)["first_failure"] == adte_check(Q.U, K, 2)["first_failure"]


def test_equivalence_rejects_bad_valuation(Q):
    with pytest.raises(ValueError):
        adt_twistor_equiv(Q, {(0, ((X,), (), (Y,))): Fraction(1)})


def test_unit_twist_equivalence(Q, cm):
    assert adt_twistor_equiv(Q, unit_chain(2), cm=cm)["agree"]


def test_embedding_is_an_operad_map(Q):
    rep = check_embedding(Q, trials=6, seed=3)
    assert rep.ok, rep.summary()


@pytest.mark.parametrize("pair", [aff1_pair, sl2_cartan_pair])
def test_injective_on_invariants(pair):
    rep = injectivity_check(QuantumGroupoid(pair(), order=2, slack=0))
    assert rep.ok, rep.summary()


def test_twisted_morphism_trivial_K(Q):
    rep = c_twisted(Q, unit_chain(2), trials=4)
    assert rep.ok, rep.summary()


def test_equivalence_suite_histogram():
    rep = suite_equiv("aff1", order=2, trials=12, dte_trials=6, seed=1)
    assert rep.ok, rep.summary()
    assert set(rep.notes["first_failure_histogram"]) >= {"1", "2", "None"}


def test_theta_gutt_mutation_is_caught():
    assert not suite_mutation("theta_gutt_drop2").ok
