from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrace.brace import (
    BraceAlgebra,
    StrictMorphism,
    check_brace_binf_axioms,
    cup,
    dg_lie_shift_bracket,
    differential,
    gerstenhaber_bracket,
    strict_morphism_from_operad,
)
from hopfbrace.hopfalgd import b_infinity_of, bialgebra_model, brace_explicit, end_model, group_algebra_s3
from hopfbrace.operad import OperadElement, OperadError, OperadMorphism
from hopfbrace.reporting import sample_rng


@pytest.fixture(scope="module")
def ks3():
    return b_infinity_of(group_algebra_s3())


@pytest.fixture(scope="module")
def prim():
    return b_infinity_of(bialgebra_model("prim", d=1, order=None, max_degree=2))


def pt(alg, *keys, c=1):
    """A pure tensor (or sum of them) in the operad of a ground-field bialgebra."""
    n = len(keys[0])
    return OperadElement(n, {(0, tuple(k)): Fraction(c) for k in keys}, alg.model.name)


def test_empty_brace_is_identity(ks3):
    x = ks3.sample(sample_rng(1, 0), 2, 3)
    assert ks3.brace(x, []) == x


def test_m_brace_m_vanishes(ks3, prim):
    for alg in (ks3, prim):
        assert alg.model.is_zero(alg.brace(alg.m, [alg.m]))


def test_too_many_arguments_give_zero(ks3):
    x = pt(ks3, (1,))
    assert ks3.brace(x, [x, x]).is_zero()


def test_cup_of_degree_one_elements(prim):
    x = pt(prim, ((1,),))
    y = pt(prim, ((2,),))
    assert cup(prim, x, y).terms == {(0, ((1,), (2,))): -1}


def test_cup_sign_even(prim):
    x = pt(prim, ((1,), (0,)))
    y = pt(prim, ((2,),))
    assert prim.cup(x, y).terms == {(0, ((1,), (0,), (2,))): 1}


def test_unit_cup(ks3):
    one = OperadElement(0, {(0, ()): Fraction(1)}, ks3.model.name)
    y = ks3.sample(sample_rng(2, 0), 2, 3)
    assert ks3.cup(one, y) == y


def test_differential_of_square(prim):
    # delta(x^2) = x^2(x)1 - Delta(x^2) + 1(x)x^2 = -2 x(x)x
    assert differential(prim, pt(prim, ((2,),))).terms == {(0, ((1,), (1,))): -2}


def test_differential_of_primitive_vanishes(prim):
    assert prim.differential(pt(prim, ((1,),))).is_zero()


@pytest.mark.parametrize("g", range(6))
def test_differential_of_grouplike(ks3, g):
    e = 0
    want = {}
    for key, c in (((g, e), 1), ((g, g), -1), ((e, g), 1)):
        want[(0, key)] = want.get((0, key), 0) + c
    want = {k: c for k, c in want.items() if c}
    assert ks3.differential(pt(ks3, (g,))).terms == want


def test_bracket_with_m_is_differential(ks3):
    for t in range(10):
        rng = sample_rng(0, t, "bm")
        x = ks3.sample(rng, rng.randint(0, 3), 2)
        assert ks3.equal(gerstenhaber_bracket(ks3, ks3.m, x), ks3.differential(x))
    assert ks3.bracket(ks3.m, ks3.m).is_zero()
    assert dg_lie_shift_bracket(ks3, ks3.m, ks3.m).is_zero()


def test_brace_matches_closed_form(ks3):
    for t in range(20):
        rng = sample_rng(4, t, "bx")
        x = ks3.sample(rng, rng.randint(0, 3), 2)
        ys = [ks3.sample(rng, rng.randint(0, 2), 2) for _ in range(1 + t % 3)]
        assert brace_explicit(ks3.model.info["hopf"], x, ys) == ks3.brace(x, ys)


def test_no_multiplication(ks3):
    bare = BraceAlgebra(ks3.model)
    with pytest.raises(OperadError):
        bare.cup(ks3.m, ks3.m)


def test_non_multiplication_rejected(ks3):
    with pytest.raises(OperadError):
        BraceAlgebra(ks3.model, pt(ks3, (1, 2)))


@pytest.mark.parametrize("model", ["ks3", "endA"])
def test_binf_axioms(model):
    H = group_algebra_s3() if model == "ks3" else end_model()
    rep = check_brace_binf_axioms(b_infinity_of(H), trials=15, seed=1, degree=3, delta_samples=60)
    assert rep.ok, rep.summary()
    assert {"prejacobi_1_1", "prejacobi_2_2", "distributivity_3", "homotopy_3", "delta_squared"} <= set(rep.checks)


def test_brace_sign_mutation_breaks_prejacobi():
    alg = b_infinity_of(group_algebra_s3(), check=False, mutation="brace_sign")
    rep = check_brace_binf_axioms(alg, trials=10, seed=0, degree=2, delta_samples=5)
    assert rep.checks["prejacobi_1_1"][1] > 0


def test_identity_strict_morphism(ks3):
    f = strict_morphism_from_operad(OperadMorphism(ks3.model, ks3.model, lambda x: x), ks3.m, ks3.m)
    assert isinstance(f, StrictMorphism)
    assert f.check(trials=10).ok


def test_strict_morphism_needs_m_to_m(ks3):
    f = OperadMorphism(ks3.model, ks3.model, lambda x: x)
    with pytest.raises(OperadError):
        strict_morphism_from_operad(f, ks3.m, ks3.m.scale(2))


def _shift(x):
    return x.arity - 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_delta_squared_and_antisymmetry(ks3, seed):
    rng = sample_rng(seed, 0, "h")
    x = ks3.sample(rng, rng.randint(0, 3), 2)
    y = ks3.sample(rng, rng.randint(0, 2), 2)
    assert ks3.model.is_zero(ks3.differential(ks3.differential(x)))
    s = -1 if ((x.arity + 1) * (y.arity + 1)) % 2 else 1
    assert ks3.equal(ks3.bracket(x, y), ks3.bracket(y, x).scale(-s))


def _sg(e):
    return -1 if e % 2 else 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_bracket_is_dg_lie_in_shifted_degrees(ks3, seed):
    rng = sample_rng(seed, 0, "dg")
    a, b, c = (ks3.sample(rng, rng.randint(0, 2), 2) for _ in range(3))
    B = ks3.bracket
    d = lambda z: ks3.differential(z).scale(-1)
    jac = B(a, B(b, c))
    assert ks3.equal(jac, B(B(a, b), c) + B(b, B(a, c)).scale(_sg(_shift(a) * _shift(b))))
    assert ks3.equal(d(B(a, b)), B(d(a), b) + B(a, d(b)).scale(_sg(_shift(a))))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_sign_twisted_bracket_relations(ks3, seed):
    # with the (-1)^|x| twist the bracket is graded symmetric in W-degrees and
    # -delta acts on it up to an overall sign
    rng = sample_rng(seed, 0, "tw")
    a, b = (ks3.sample(rng, rng.randint(0, 2), 2) for _ in range(2))
    S = ks3.shifted_bracket
    d = lambda z: ks3.differential(z).scale(-1)
    assert ks3.equal(S(a, b), S(b, a).scale(_sg(a.arity * b.arity)))
    assert ks3.equal(d(S(a, b)), (S(d(a), b) + S(a, d(b)).scale(_sg(a.arity))).scale(-1))
