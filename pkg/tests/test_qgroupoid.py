from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrace.coeff import WindowError, vec_sub
from hopfbrace.hopfalgd import check_hopfalgd_axioms
from hopfbrace.liepair import abelian_pair, aff1_full_pair, aff1_pair, sl2_cartan_pair
from hopfbrace.qgroupoid import QuantumGroupoid, hgl_model, lemma_suite, multi_of, word_of
from hopfbrace.reporting import sample_rng
from hopfbrace.suites import suite_lemmas, suite_mutation, suite_star

half = Fraction(1, 2)


@pytest.fixture(scope="module")
def aff():
    # l = g = span(x, y) with [x, y] = y
    return QuantumGroupoid(aff1_full_pair(), order=3, slack=0)


def test_word_multi_roundtrip():
    assert word_of((2, 0, 1)) == (0, 0, 2)
    assert multi_of((0, 0, 2), 3) == (2, 0, 1)


def test_pbw_hbar_generators(aff):
    assert aff.pbw_hbar(aff.lam(0)) == {(1, (0,)): 1}
    # pbw(lambda_x lambda_y) = (xy + yx)/2 = xy - y/2
    assert aff.pbw_hbar(aff.poly((1, 1))) == {(2, (0, 1)): 1, (2, (1,)): -half}


def test_pbw_hbar_inverse_window(aff):
    with pytest.raises(WindowError):
        aff.pbw_hbar_inverse({(0, (0,)): Fraction(1)})
    assert aff.pbw_hbar_inverse({(0, (0,)): Fraction(1)}, laurent=True) == {(-1, ((1, 0), ())): 1}


def test_star_of_generators(aff):
    x, y = aff.lam(0), aff.lam(1)
    assert aff.star_pbw(x, y) == {(0, ((1, 1), ())): 1, (1, ((0, 1), ())): half}
    assert aff.star_pbw(y, x) == {(0, ((1, 1), ())): 1, (1, ((0, 1), ())): -half}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_star_commutator_is_hbar_bracket(seed):
    Q = QuantumGroupoid(aff1_full_pair(), order=3, slack=0)
    rng = sample_rng(seed, 0)
    f = Q.poly((rng.randint(0, 2), rng.randint(0, 2)), rng.choice([1, -2, 3]))
    x = Q.lam(0)
    comm = vec_sub(Q.star_pbw(x, f), Q.star_pbw(f, x))
    # [lambda_x, -]_star = hbar ad*_x, and ad*_x counts the y-degree
    assert comm == {(v + 1, k): c * k[0][1] for (v, k), c in f.items() if k[0][1]}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_star_is_associative(seed):
    Q = QuantumGroupoid(sl2_cartan_pair(), order=4, slack=0)
    rng = sample_rng(seed, 0)
    f, g, h = (Q.poly((rng.randint(0, 2),), rng.choice([1, 2, -1])) for _ in range(3))
    assert Q.star_pbw(Q.star_pbw(f, g), h) == Q.star_pbw(f, Q.star_pbw(g, h))


def test_theta_pbw_low_orders(aff):
    T = aff.theta_pbw(2)
    z = (0, 0)
    assert T[(0, (z, (((), z), ((), z))))] == 1
    first = {k: c for k, c in T.items() if k[0] == 1}
    # half the Poisson bivector lambda_y (d_x ^ d_y)
    assert first == {
        (1, ((0, 1), (((), (1, 0)), ((), (0, 1))))): half,
        (1, ((0, 1), (((), (0, 1)), ((), (1, 0))))): -half,
    }


def test_theta_pbw_reproduces_star(aff):
    for a in ((1, 0), (0, 2), (1, 1)):
        for b in ((0, 1), (2, 0)):
            f, g = aff.poly(a), aff.poly(b)
            assert aff.theta_pbw_eval(f, g) == aff.truncate(aff.star_pbw(f, g))


def test_varphi_of_one():
    Q = QuantumGroupoid(aff1_full_pair(), order=3, slack=1)
    assert Q.varphi({(0, ()): Fraction(1)}) == Q.H.op()


def test_abelian_theta_gutt_is_exponential():
    Q = QuantumGroupoid(abelian_pair(2, 1), order=2, slack=0)
    assert Q.theta_pbw() == {(0, ((0,), (((), (0,)), ((), (0,))))): 1}
    assert Q.theta_gutt() == {
        (0, ((0,), (((), (0,)), ((), (0,))))): 1,
        (1, ((0,), (((), (1,)), ((0,), (0,))))): 1,
        (2, ((0,), (((), (2,)), ((0, 0), (0,))))): half,
    }


@pytest.mark.parametrize("pair", [aff1_pair, sl2_cartan_pair])
def test_hgl_axioms(pair):
    rep = check_hopfalgd_axioms(hgl_model(pair(), 2), trials=5)
    assert rep.ok, rep.summary()


@pytest.mark.parametrize("pair", [aff1_pair, sl2_cartan_pair])
def test_lemma_suite(pair):
    rep = lemma_suite(pair(), order=2, trials=8, seed=3)
    assert rep.ok, rep.summary()
    assert "detects_noninvariant" in rep.checks


def test_star_suite():
    assert suite_star(("aff1",), order=3, degree=3).ok


def test_straightening_mutation_is_caught():
    assert not suite_mutation("straightening").ok


def test_lemmas_wrapper_defaults():
    rep = suite_lemmas("aff1", order=2, trials=3)
    assert rep.ok and rep.trials == 3
