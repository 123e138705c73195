import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrace.hopfalgd import bialgebra_model, group_algebra_s3, operad_model
from hopfbrace.operad import (
    Multiplication,
    OperadElement,
    OperadError,
    OperadModel,
    OperadMorphism,
    check_morphism,
    check_operad_axioms,
    compose_full,
    partial_compose,
)
from hopfbrace.reporting import sample_rng

PERMS = list(itertools.permutations(range(3)))


def perm_index(p):
    return PERMS.index(tuple(p))


def compose_perm(a, b):
    # (a b)(i) = a(b(i)), by hand
    return perm_index([PERMS[a][PERMS[b][i]] for i in range(3)])


@pytest.fixture(scope="module")
def ks3():
    return operad_model(group_algebra_s3())


def elem(P, arity, *keys):
    return OperadElement(arity, {(0, tuple(k)): Fraction(1) for k in keys}, P.name)


def test_gamma_identity_left(ks3):
    x = elem(ks3, 2, (1, 4))
    assert compose_full(ks3, ks3.identity, [x]) == x


def test_gamma_identities_right(ks3):
    x = elem(ks3, 2, (1, 4), (2, 2))
    assert compose_full(ks3, x, [ks3.identity, ks3.identity]) == x


@pytest.mark.parametrize("g,h,u,v", [(1, 2, (3, 4), (5,)), (4, 0, (1,), (2, 3)), (5, 5, (0, 0), ())])
def test_gamma_grouplikes(ks3, g, h, u, v):
    x = elem(ks3, 2, (g, h))
    U = elem(ks3, len(u), u)
    V = elem(ks3, len(v), v) if v else OperadElement(0, {(0, ()): Fraction(1)}, ks3.name)
    got = compose_full(ks3, x, [U, V])
    want = tuple(compose_perm(g, a) for a in u) + tuple(compose_perm(h, b) for b in v)
    assert got.terms == {(0, want): 1}


def test_partial_with_unit(ks3):
    x = elem(ks3, 3, (1, 2, 3))
    for i in (1, 2, 3):
        assert partial_compose(ks3, x, i, ks3.identity) == x
    assert partial_compose(ks3, ks3.identity, 1, x) == x


def test_partial_arity_one_bialgebra():
    P = operad_model(bialgebra_model("prim", d=1, order=None))
    x = OperadElement(2, {(0, ((1,), (2,))): Fraction(1)}, P.name)
    y = OperadElement(1, {(0, ((3,),)): Fraction(1)}, P.name)
    # (x1 (x) x2) o_1 y = (x1 y) (x) x2
    assert partial_compose(P, x, 1, y).terms == {(0, ((4,), (2,))): 1}


def test_errors(ks3):
    x = elem(ks3, 2, (0, 0))
    with pytest.raises(OperadError):
        partial_compose(ks3, x, 3, x)
    with pytest.raises(OperadError):
        compose_full(ks3, x, [x])
    with pytest.raises(OperadError):
        compose_full(ks3, x, [x, OperadElement(1, {}, "elsewhere")])


def test_axioms_ks3(ks3):
    rep = check_operad_axioms(ks3, trials=100, seed=3, size=3)
    assert rep.ok, rep.summary()
    assert set(rep.checks) >= {"sequential", "parallel", "unit", "gamma_from_partials"}


def test_arity_zero_sampling_is_vacuous(ks3):
    rep = check_operad_axioms(ks3, trials=5, max_arity=0)
    assert rep.ok and set(rep.checks) == {"unit_left"}


def _sign_dropped(P):
    """o_i that forgets a sign whenever slot 2 is used."""

    def partial(x, i, y):
        out = partial_compose(P, x, i, y)
        return out.scale(-1) if i == 2 else out

    return OperadModel(P.name, P.identity, P.sample, partial=partial, max_arity=3)


def test_corrupted_model_is_caught(ks3):
    rep = check_operad_axioms(_sign_dropped(ks3), trials=40)
    assert not rep.ok
    w = rep.failures[0]
    assert w["seed"] is not None and w["lhs"] is not None


def test_identity_morphism(ks3):
    f = OperadMorphism(ks3, ks3, lambda x: x)
    assert check_morphism(f, trials=20).ok


def test_morphism_requires_unit(ks3):
    with pytest.raises(OperadError):
        OperadMorphism(ks3, ks3, lambda x: x.scale(2))


def test_multiplication_check(ks3):
    H = ks3.info["hopf"]
    Multiplication(ks3, OperadElement(2, H.tp_unit(2), ks3.name))
    with pytest.raises(OperadError):
        Multiplication(ks3, ks3.identity)
    # g (x) h with g != h is not associative in the operad sense
    with pytest.raises(OperadError):
        Multiplication(ks3, elem(ks3, 2, (1, 2)))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=1, max_value=3))
def test_gamma_is_multilinear(ks3, seed, n):
    rng = sample_rng(seed, 0, "lin")
    x = ks3.sample(rng, n, 2)
    ys = [ks3.sample(rng, rng.randint(0, 2), 2) for _ in range(n)]
    z = ks3.sample(rng, ys[0].arity, 2)
    lhs = compose_full(ks3, x, [ys[0] + z.scale(3)] + ys[1:])
    rhs = compose_full(ks3, x, ys) + compose_full(ks3, x, [z] + ys[1:]).scale(3)
    assert ks3.equal(lhs, rhs)
