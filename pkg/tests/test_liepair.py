from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrace.io import dump_pair, load_pair
from hopfbrace.liepair import (
    LiePair,
    UEnv,
    abelian_pair,
    adte_check,
    aff1_pair,
    check_invariance,
    invariant_basis,
    pair_from_dict,
    place,
    random_invariant,
    sl2_cartan_pair,
    sym_to_u,
    u_to_sym,
    unit_chain,
    valuation_check,
    wgl_differential_explicit,
)
from hopfbrace.operad import OperadError
from hopfbrace.reporting import sample_rng
from hopfbrace.suites import PAIRS, get_pair, suite_explicit, suite_operad, suite_wgl

Y, X = 0, 1  # aff1 basis (y, x), [x, y] = y
H, E, F = 0, 1, 2  # sl2 basis


@pytest.fixture(scope="module")
def aff():
    return UEnv(aff1_pair())


@pytest.fixture(scope="module")
def sl2():
    return UEnv(sl2_cartan_pair())


def ch(*words, v=0, c=1):
    return {(v, tuple(words)): Fraction(c)}


def test_straightening_aff1(aff):
    # x y = y x + [x, y] = y x + y
    assert aff.mul((X,), (Y,)) == {(Y, X): 1, (Y,): 1}
    assert aff.mul((Y,), (X,)) == {(Y, X): 1}


def test_straightening_sl2(sl2):
    # f e = e f - h
    assert sl2.mul((F,), (E,)) == {(E, F): 1, (H,): -1}
    assert sl2.mul((E,), (F,)) == {(E, F): 1}


def test_coproduct_of_product(aff):
    want = {((Y, X), ()): 1, ((Y,), (X,)): 1, ((X,), (Y,)): 1, ((), (Y, X)): 1}
    assert aff.coproduct((Y, X)) == want
    assert aff.counit(()) == 1 and aff.counit((X,)) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_multiplication_is_associative(seed):
    U = UEnv(sl2_cartan_pair())
    rng = sample_rng(seed, 0)
    a, b, c = (U.sample_word(rng, 2) for _ in range(3))
    left = U.multiply(U.mul(a, b), {c: Fraction(1)})
    right = U.multiply({a: Fraction(1)}, U.mul(b, c))
    assert left == right


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_pbw_symmetrisation_roundtrip(seed):
    U = UEnv(sl2_cartan_pair())
    w = tuple(sorted(U.sample_word(sample_rng(seed, 0), 3)))
    back = {}
    for a, c in u_to_sym(U, w).items():
        for ww, cc in sym_to_u(U, a).items():
            back[ww] = back.get(ww, 0) + c * cc
    assert {k: c for k, c in back.items() if c} == {w: 1}


def test_casimir_is_invariant(sl2):
    C = {(0, ((H, H), ())): Fraction(1, 2), (0, ((E, F), ())): Fraction(1)}
    for w, c in sl2.mul((F,), (E,)).items():
        C[(0, (w, ()))] = C.get((0, (w, ())), 0) + c
    assert check_invariance(sl2, C, 1)[0]


def test_non_invariant_chain(sl2):
    ok, gen, res = check_invariance(sl2, ch((E,), (), ()), 2)
    assert not ok and gen == H
    # [h, e] = 2e
    assert res == ch((E,), (), (), c=-2) or res == ch((E,), (), (), c=2)


def test_invariant_basis_is_invariant(sl2):
    basis = invariant_basis(sl2, 1, 2)
    assert basis and all(check_invariance(sl2, b, 1)[0] for b in basis)
    # e f is the only weight-zero two-letter word outside U(h)
    assert {(0, ((E, F), ())): 1} in basis


def test_abelian_basis_is_every_monomial():
    U = UEnv(abelian_pair(2, 1))
    assert len(invariant_basis(U, 1, 1)) == 4


def test_place_splits_and_fills(aff):
    A = ch((X,), (Y,), ())
    assert place(aff, A, [(1, 2), (3,), (4,)], 4) == {**ch((X,), (), (Y,), ()), **ch((), (X,), (Y,), ())}


def test_place_empty_block_is_counit(aff):
    assert place(aff, ch((X,), (), ()), [(), (1,), (2,)], 2) == {}
    assert place(aff, ch((), (Y,), ()), [(), (1,), (2,)], 2) == ch((Y,), ())


@pytest.mark.parametrize("blocks,total", [([(1, 3), (4,)], 4), ([(2,), (1,)], 2), ([(1, 2), (2,)], 2)])
def test_place_rejects_bad_blocks(aff, blocks, total):
    with pytest.raises(OperadError):
        place(aff, ch((X,), ()), blocks, total)


def test_differential_in_degree_zero(aff):
    # delta(a) = Delta(a) - 1 (x) a on the U(l) leg
    assert wgl_differential_explicit(aff, ch((Y,)), 0) == ch((Y,), ())
    assert wgl_differential_explicit(aff, ch(()), 0) == {}


def test_unit_chain_solves_adte(aff):
    res = adte_check(aff, unit_chain(2), 2)
    assert res["first_failure"] is None and all(res["holds"].values())


def test_adte_failure_is_located(aff):
    # 1 (x) 1 (x) 1 + hbar x (x) 1 (x) 1 already fails at first order
    K = {**unit_chain(2), **ch((X,), (), (), v=1)}
    res = adte_check(aff, K, 2, graded=False)
    assert res["first_failure"] == 1 and res["residual"]


def test_valuation(aff):
    ok, bad = valuation_check(aff, ch((X,), (Y,)))
    assert not ok and bad[0]["order"] == 0
    assert valuation_check(aff, ch((X,), (Y,), v=1))[0]
    assert not valuation_check(aff, ch((X,), (Y, Y), v=1))[0]


def test_pair_validation():
    with pytest.raises(ValueError):
        LiePair(3, 2, {(0, 1): {2: 1}})  # [e0, e1] = e2 leaves l
    with pytest.raises(ValueError):
        LiePair(2, 2, {(0, 1): {0: 1}, (1, 0): {0: 1}})
    with pytest.raises(ValueError):
        LiePair(2, 0, {})


@pytest.mark.parametrize("name", sorted(PAIRS))
def test_dict_roundtrip(name):
    P = get_pair(name)
    assert pair_from_dict(P.to_dict()) == P


@pytest.mark.parametrize("name", ["aff1", "sl2"])
def test_toml_roundtrip(tmp_path, name):
    P = get_pair(name)
    path = tmp_path / f"{name}.toml"
    path.write_text(dump_pair(P))
    assert load_pair(path) == P


def test_random_invariant_is_invariant(sl2):
    for t in range(10):
        A = random_invariant(sl2, 2, sample_rng(1, t), 2)
        assert check_invariance(sl2, A, 2)[0]


@pytest.mark.parametrize("name", ["aff1", "sl2"])
def test_operad_suite(name):
    rep = suite_operad(name, trials=20, seed=2, order=2)
    assert rep.ok, rep.summary()


def test_explicit_formulas_aff1():
    assert suite_explicit("aff1", trials=20).ok


def test_wgl_suite_aff1():
    rep = suite_wgl("aff1", trials=5, degree=2)
    assert rep.ok, rep.summary()


def test_placement_mutation_breaks_operad():
    rep = suite_operad("aff1", trials=30, order=2, mutation="placement")
    assert not rep.ok
