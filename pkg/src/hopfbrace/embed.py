"""The morphism c from P_(g,l) into the operad of the quantum groupoid, and twists.

Chains are the sparse vectors of ``liepair``; images live in the tensor
powers of ``QuantumGroupoid.H`` and are compared modulo hbar^(order+1).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .brace import BraceAlgebra, StrictMorphism
from .coeff import vec_axpy, vec_scale, vec_shift, vec_sub
from .hopfalgd import operad_model
from .liepair import (
    UEnv,
    adte_check,
    gl_partial,
    invariant_basis,
    sym_to_u_leg,
    unit_chain,
    valuation_check,
    w_gl_structures,
)
from .operad import OperadElement, OperadError, partial_compose
from .qgroupoid import QuantumGroupoid, multi_of, word_of
from .reporting import Report, sample_rng
from .twist import TwistedAlgebroid, build_type_I, check_twistor, first_order

__all__ = [
    "CMorphism",
    "check_embedding",
    "dte_sides",
    "dte_check",
    "formal_to_algebraic",
    "adt_twistor_equiv",
    "c_twisted",
    "sample_formal_twist",
    "first_order_solutions",
    "extend_twist",
    "injectivity_check",
]

Vec = Dict[tuple, Fraction]


class CMorphism:
    """c_n(K) = (K_1 (x) .. (x) K_n) . Delta^{n-1}(phi(K_{n+1})) . Theta-chain."""

    def __init__(self, Q: QuantumGroupoid):
        self.Q = Q
        self.H = Q.H
        self.order = Q.order
        target = operad_model(Q.H, name=f"P[{Q.H.name}]")
        target.canon = lambda x: Q.truncate(x.terms)
        self.target = target
        self._chains: Dict[int, Vec] = {}

    def theta_chain(self, n: int) -> Vec:
        hit = self._chains.get(n)
        if hit is None:
            hit = self.Q.theta_chain(n)
            self._chains[n] = hit
        return hit

    def c(self, K: Vec, n: int) -> Vec:
        Q, H = self.Q, self.H
        if n == 0:
            out: Vec = {}
            for (v, (w,)), c in K.items():
                vec_axpy(out, H.eps(Q.varphi({(v, w): Fraction(1)})), c)
            return Q.truncate(out)
        legs = Q.leg_product(K, n)
        if n == 1:
            return Q.truncate(legs)
        return Q.truncate(H.tp_mul(legs, self.theta_chain(n), n))

    def element(self, K: Vec, n: int) -> OperadElement:
        return OperadElement(n, self.c(K, n), self.target.name)


def _sample_chain(U: UEnv, rng, n: int, size: int = 2, max_len: int = 2, shift: int = 1) -> Vec:
    """Random invariant chain whose U(l) leg lies in the image of pbw_hbar."""
    basis = invariant_basis(U, n, max_len, sym_leg=True)
    out: Vec = {}
    for _ in range(rng.randint(1, size)):
        b = rng.choice(basis)
        vec_axpy(out, vec_shift(b, rng.randint(0, shift)), Fraction(rng.choice([-2, -1, 1, 2])))
    return sym_to_u_leg(U, out)


def check_embedding(Q: QuantumGroupoid, trials: int = 20, seed: int = 0, max_degree: int = 2,
                    strict_trials: int = 0, size: int = 2) -> Report:
    """c(A o_i B) = c(A) o_i c(B) on sampled invariant chains, modulo hbar^(order+1)."""
    cm = CMorphism(Q)
    U = Q.U
    rep = Report(f"embedding[{Q.pair.name}]", config={"seed": seed, "trials": trials, "order": Q.order})
    m = unit_chain(2)
    theta = Q.theta_gutt()
    rep.record("c2_of_m_is_theta", not Q.truncate(vec_sub(cm.c(m, 2), theta)), "unit")
    rep.record("c1_of_unit", not vec_sub(cm.c(unit_chain(1), 1), Q.H.tp1(Q.H.h_unit())), "unit")
    for t in range(trials):
        rng = sample_rng(seed, t, "embedding")
        rep.trials += 1
        n = rng.randint(1, max_degree)
        k = rng.randint(0, max_degree)
        i = rng.randint(1, n)
        A = _sample_chain(U, rng, n, size)
        B = _sample_chain(U, rng, k, size)
        lhs = cm.c(gl_partial(U, A, n, i, B, k), n + k - 1)
        rhs = partial_compose(cm.target, cm.element(A, n), i, cm.element(B, k)).terms
        rep.record("partial", not Q.truncate(vec_sub(lhs, rhs)), t, {"A": A, "B": B, "i": i, "n": n, "m": k}, lhs, rhs)
    if strict_trials:
        src = w_gl_structures(U, order=Q.order, graded=True)
        tgt = BraceAlgebra(cm.target, OperadElement(2, theta, cm.target.name), check=False)
        mm = tgt.brace(tgt.m, [tgt.m])
        rep.record("theta_is_multiplication", tgt.model.is_zero(mm), "unit")
        sample = lambda rng, arity, size_: OperadElement(arity, _sample_chain(U, rng, arity, 1), src.model.name)
        src.model.sample = sample
        sm = StrictMorphism(src, tgt, lambda x: cm.element(x.terms, x.arity))
        rep.merge(sm.check(trials=strict_trials, seed=seed, degree=max_degree, size=1, max_args=2))
    return rep


# ---------------------------------------------------------------------------
# dynamical twist equations


def _sym_mul(Q: QuantumGroupoid, X: Vec, Y: Vec, order: int) -> Vec:
    """(x_1 (x) .. (x) f) * (y_1 (x) .. (x) g) = x_1 y_1 (x) .. (x) f star_PBW g."""
    U, d = Q.U, Q.d
    out: Vec = {}
    for (v1, w1), c1 in X.items():
        for (v2, w2), c2 in Y.items():
            if v1 + v2 > order:
                continue
            f = Q.poly(multi_of(w1[-1], d), v=v1)
            g = Q.poly(multi_of(w2[-1], d), v=v2)
            star = {k: c for k, c in Q.star_pbw(f, g).items() if k[0] <= order}
            parts = [list(U.mul(a, b).items()) for a, b in zip(w1[:-1], w2[:-1])]
            for combo in itertools.product(*parts):
                c = c1 * c2
                for _, x in combo:
                    c *= x
                gw = tuple(w for w, _ in combo)
                for (v, (a, _)), cs in star.items():
                    vec_axpy(out, {(v, gw + (word_of(a),)): c * cs})
    return out


def _sym_place(U: UEnv, F: Vec, blocks) -> Vec:
    """Place the U(g) legs of a symmetric-leg chain over 3 slots; the function leg stays."""
    out: Vec = {}
    for (v, words), c in F.items():
        parts = [list(U.coproduct_n(w, len(b) - 1).items()) for w, b in zip(words[:-1], blocks)]
        for combo in itertools.product(*parts):
            coef = c
            slots: List[tuple] = [()] * 3
            for (pieces, cc), b in zip(combo, blocks):
                coef *= cc
                for s, piece in zip(b, pieces):
                    slots[s - 1] = piece
            vec_axpy(out, {(v, tuple(slots) + (words[-1],)): coef})
    return out


def shift_third(Q: QuantumGroupoid, F12: Vec, order: int) -> Vec:
    """F_{1,2}(lambda + hbar h_3): Taylor expansion with h's in the third slot."""
    U, d = Q.U, Q.d
    out: Vec = {}
    for (v, words), c in F12.items():
        a = multi_of(words[-1], d)
        for k in range(order - v + 1):
            for I in itertools.product(range(d), repeat=k):
                b = multi_of(I, d)
                if any(x > y for x, y in zip(b, a)):
                    continue
                coef = Fraction(1, factorial(k))
                for x, y in zip(a, b):
                    coef *= factorial(x) // factorial(x - y)
                rest = word_of(tuple(x - y for x, y in zip(a, b)))
                for w3, cw in U.mul(words[2], tuple(sorted(I))).items():
                    vec_axpy(out, {(v + k, words[:2] + (w3, rest)): c * coef * cw})
    return out


def dte_sides(Q: QuantumGroupoid, F: Vec, order: int) -> Tuple[Vec, Vec]:
    """F_{1^2,3}(l) * F_{1,2}(l + hbar h_3) and F_{1,2^3}(l) * F_{2,3}(l)."""
    U = Q.U
    f12_3 = _sym_place(U, F, [(1, 2), (3,)])
    f1_23 = _sym_place(U, F, [(1,), (2, 3)])
    f12 = _sym_place(U, F, [(1,), (2,)])
    f23 = _sym_place(U, F, [(2,), (3,)])
    # the sorted-word slot 3 of f12 is empty, so the Taylor factor is just the h-word
    f12s = shift_third(Q, f12, order)
    return _sym_mul(Q, f12_3, f12s, order), _sym_mul(Q, f1_23, f23, order)


def dte_check(Q: QuantumGroupoid, F: Vec, order: int) -> dict:
    lhs, rhs = dte_sides(Q, F, order)
    diff = vec_sub(lhs, rhs)
    first = first_order(diff)
    return {"first_failure": first, "holds": {k: first is None or k < first for k in range(order + 1)}, "residual": diff}


def formal_to_algebraic(U: UEnv, F: Vec) -> Vec:
    """K = (id (x) id (x) pbw_hbar) F."""
    return sym_to_u_leg(U, F)


# ---------------------------------------------------------------------------
# ADT <-> twistor


def adt_twistor_equiv(Q: QuantumGroupoid, K: Vec, order: Optional[int] = None, cm: Optional[CMorphism] = None) -> dict:
    """Independent per-order verdicts of the ADTE for K and the twistor equations for c(K)."""
    top = Q.order if order is None else order
    ok, bad = valuation_check(Q.U, K)
    if not ok:
        raise ValueError(f"valuation property fails: {bad[:1]}")
    cm = cm or CMorphism(Q)
    adte = adte_check(Q.U, K, top)
    cK = cm.c(K, 2)
    tw = check_twistor(Q.H, cK)
    tw_first = tw["twistor_order"]
    if tw_first is not None and tw_first > top:
        tw_first = None
    co = tw["counit_order"]
    if co is not None and co > top:
        co = None
    return {
        "adte_first_failure": adte["first_failure"],
        "twistor_first_failure": tw_first,
        "counit_first_failure": co,
        "agree": adte["first_failure"] == tw_first,
    }


def sample_formal_twist(Q: QuantumGroupoid, rng, orders: Sequence[int] = (1, 2), size: int = 2,
                        max_len: int = 3, fixed: Optional[Dict[int, Vec]] = None) -> Vec:
    """F = 1 (x) 1 (x) 1 + sum_k hbar^k F_k with invariant F_k whose U(g) legs are nonempty.

    Nonempty legs make the counit normalisation automatic.
    """
    basis = invariant_basis(Q.U, 2, max_len, sym_leg=True, min_g=1)
    F: Vec = {(0, ((), (), ())): Fraction(1)}
    for k in orders:
        if fixed and k in fixed:
            vec_axpy(F, vec_shift(fixed[k], k))
            continue
        for _ in range(rng.randint(1, size)):
            if basis:
                vec_axpy(F, vec_shift(rng.choice(basis), k), Fraction(rng.choice([-2, -1, 1, 2])))
    return F


def _order_residual(Q: QuantumGroupoid, F: Vec, k: int) -> Vec:
    lhs, rhs = dte_sides(Q, F, k)
    return {key: c for key, c in vec_sub(lhs, rhs).items() if key[0] == k}


def _solve(cols: List[Vec], target: Vec):
    """Rational x with sum_j x_j cols[j] = target, plus a nullspace basis; None if inconsistent."""
    from sympy import Matrix, Rational

    rows: Dict[tuple, int] = {}
    for col in cols + [target]:
        for key in col:
            rows.setdefault(key, len(rows))
    if not rows:
        return [Fraction(0)] * len(cols), [[Fraction(int(i == j)) for i in range(len(cols))] for j in range(len(cols))]
    q = lambda c: Rational(c.numerator, c.denominator)
    A = Matrix.zeros(len(rows), len(cols))
    for j, col in enumerate(cols):
        for key, c in col.items():
            A[rows[key], j] = q(c)
    bvec = Matrix.zeros(len(rows), 1)
    for key, c in target.items():
        bvec[rows[key], 0] = q(c)
    try:
        sol, params = A.gauss_jordan_solve(bvec)
    except ValueError:
        return None
    frac = lambda x: Fraction(int(x.p), int(x.q))
    part = [frac(x) for x in sol.subs({p: 0 for p in params})]
    null = [[frac(x) for x in v] for v in A.nullspace()]
    return part, null


def extend_twist(Q: QuantumGroupoid, F: Vec, k: int, max_len: int = 3, rng=None) -> Optional[Vec]:
    """Add hbar^k F_k from the invariant basis so that the DTE holds at order k.

    F must already satisfy the DTE below order k. The equation at order k is
    affine in F_k; returns None when it has no solution in the basis span.
    With ``rng`` a random point of the solution space is taken.
    """
    basis = invariant_basis(Q.U, 2, max_len, sym_leg=True, min_g=1)
    base = _order_residual(Q, F, k)
    cols = []
    for b in basis:
        trial = dict(F)
        vec_axpy(trial, vec_shift(b, k))
        cols.append(vec_sub(_order_residual(Q, trial, k), base))
    found = _solve(cols, vec_scale(base, -1))
    if found is None:
        return None
    part, null = found
    coeffs = list(part)
    if rng is not None:
        for v in null:
            c = Fraction(rng.choice([-1, 0, 1, 2]))
            coeffs = [x + c * y for x, y in zip(coeffs, v)]
    out = dict(F)
    for b, c in zip(basis, coeffs):
        if c:
            vec_axpy(out, vec_shift(b, k), c)
    return out


def first_order_solutions(Q: QuantumGroupoid, max_len: int = 3) -> List[Vec]:
    """Basis of hbar^1 coefficients F_1 that satisfy the DTE at order 1."""
    basis = invariant_basis(Q.U, 2, max_len, sym_leg=True, min_g=1)
    one = {(0, ((), (), ())): Fraction(1)}
    cols = []
    for b in basis:
        F = dict(one)
        vec_axpy(F, vec_shift(b, 1))
        cols.append(_order_residual(Q, F, 1))
    _, null = _solve(cols, {})
    out = []
    for v in null:
        vec: Vec = {}
        for b, c in zip(basis, v):
            if c:
                vec_axpy(vec, b, c)
        if vec:
            out.append(vec)
    return out


# ---------------------------------------------------------------------------
# the twisted morphism


def c_twisted(Q: QuantumGroupoid, K: Vec, trials: int = 20, seed: int = 0, max_degree: int = 2,
              mutation: Optional[str] = None) -> Report:
    """c_K = (c(K)-sharp)^{-1} o c; checks the diagram and the twisted intertwining."""
    cm = CMorphism(Q)
    U = Q.U
    F = cm.c(K, 2)
    TA = TwistedAlgebroid(Q.H, F, check=True, mutation=mutation)
    tgt = build_type_I(TA, check=False)
    src = w_gl_structures(U, order=Q.order, graded=True)
    Kel = OperadElement(2, K, src.model.name)
    rep = Report(f"twisted[{Q.pair.name}]", config={"seed": seed, "trials": trials, "order": Q.order})

    def cK(A: Vec, n: int) -> Vec:
        return TA.fsharp_inverse(cm.c(A, n), n)

    def same(x: Vec, y: Vec, n: int) -> bool:
        return not Q.truncate(vec_sub(TA.fsharp(x, n), TA.fsharp(y, n)))

    for t in range(trials):
        rng = sample_rng(seed, t, "twisted")
        rep.trials += 1
        n = rng.randint(0, max_degree)
        A = _sample_chain(U, rng, n, 2)
        img = cK(A, n)
        rep.record("diagram", not Q.truncate(vec_sub(TA.fsharp(img, n), cm.c(A, n))), t, {"A": A, "n": n})

        Ael = OperadElement(n, A, src.model.name)
        dA = src.brace(Kel, [Ael]) - src.brace(Ael, [Kel]).scale(-1 if n % 2 == 0 else 1)
        lhs = cK(dA.terms, n + 1)
        rhs = tgt.differential(OperadElement(n, img, tgt.model.name)).terms
        rep.record("differential", same(lhs, rhs, n + 1), t, {"A": A, "n": n})

        k = rng.randint(0, max_degree)
        B = _sample_chain(U, rng, k, 1)
        Bel = OperadElement(k, B, src.model.name)
        cup = src.brace(Kel, [Ael, Bel]).scale(-1 if n % 2 else 1)
        lhs = cK(cup.terms, n + k)
        rhs = tgt.cup(OperadElement(n, img, tgt.model.name), OperadElement(k, cK(B, k), tgt.model.name)).terms
        rep.record("cup", same(lhs, rhs, n + k), t, {"A": A, "B": B, "n": n, "m": k})
    return rep


def injectivity_check(Q: QuantumGroupoid, degrees: Sequence[int] = (0, 1, 2), max_len: int = 2,
                      cm: Optional[CMorphism] = None) -> Report:
    """c is injective on the pbw_hbar-weighted invariant basis: images have full rank."""
    from sympy import Matrix, Rational

    cm = cm or CMorphism(Q)
    rep = Report(f"injectivity[{Q.pair.name}]", config={"degrees": list(degrees), "max_len": max_len})
    for n in degrees:
        basis = [sym_to_u_leg(Q.U, b) for b in invariant_basis(Q.U, n, max_len, sym_leg=True)]
        images = [cm.c(b, n) for b in basis]
        keys = sorted({k for im in images for k in im}, key=repr)
        index = {k: i for i, k in enumerate(keys)}
        M = Matrix.zeros(len(keys), len(images))
        for j, im in enumerate(images):
            for k, c in im.items():
                M[index[k], j] = Rational(c.numerator, c.denominator)
        rank = M.rank() if images else 0
        rep.trials += 1
        rep.record(f"rank_degree_{n}", rank == len(images), n, {"size": len(images), "rank": rank})
    return rep
