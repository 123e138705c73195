"""Twistors, twisted Hopf algebroids and the two twisted brace B-infinity algebras.

Tensors over the twisted base ring are stored as lifts: sparse vectors keyed
``(v, (h_1, ..., h_n))`` over the plain K-tensor power of H.  Two lifts name
the same element exactly when their images under F-sharp agree, so F-sharp is
the canonical form used for equality.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .brace import BraceAlgebra, StrictMorphism
from .coeff import WindowError, vec_axpy, vec_scale, vec_shift, vec_sub
from .hopfalgd import HopfAlgebroid, operad_model
from .operad import OperadElement, OperadModel
from .reporting import Report, sample_rng

__all__ = [
    "TwistorVerdict",
    "check_twistor",
    "TwistedAlgebroid",
    "exponential_twistor",
    "trivial_twistor",
    "build_type_I",
    "build_type_II",
    "verify_two_types",
    "check_twisted_axioms",
    "first_order",
]

Vec = Dict[tuple, Fraction]


def first_order(x: Vec) -> Optional[int]:
    """Lowest hbar exponent carried by a nonzero vector, or None for zero."""
    return min(k[0] for k in x) if x else None


class TwistorVerdict(dict):
    """Outcome of a twistor check: which equation fails and from which hbar order."""

    @property
    def ok(self) -> bool:
        return self["twistor_order"] is None and self["counit_order"] is None


def _lhs_rhs(H: HopfAlgebroid, F: Vec) -> Tuple[Vec, Vec]:
    lift = H.lift(F, 2)
    one = H.tp1(H.h_unit())
    d_id: Vec = {}
    id_d: Vec = {}
    for (v, (f1, f2)), c in lift.items():
        x1 = {(v, f1): Fraction(1)}
        x2 = {(0, f2): Fraction(1)}
        vec_axpy(d_id, H.concat2(H.delta(x1), 2, H.tp1(x2), 1), c)
        vec_axpy(id_d, H.concat2(H.tp1(x1), 1, H.delta(x2), 2), c)
    # F's function factors stay inside F's own block of slots
    f_one = H.concat_lift([(2, F), (1, one)])
    one_f = H.concat_lift([(1, one), (2, F)])
    return H.right_action(d_id, 3, f_one), H.right_action(id_d, 3, one_f)


def counit_sides(H: HopfAlgebroid, F: Vec) -> Tuple[Vec, Vec]:
    left: Vec = {}
    right: Vec = {}
    for (v, (f1, f2)), c in H.lift(F, 2).items():
        x1 = {(v, f1): Fraction(1)}
        x2 = {(0, f2): Fraction(1)}
        vec_axpy(left, H.h_mul(H.alpha(H.eps(x1)), x2), c)
        vec_axpy(right, H.h_mul(H.beta(H.eps(x2)), x1), c)
    return left, right


def check_twistor(H: HopfAlgebroid, F: Vec) -> TwistorVerdict:
    """Test the cocycle and counit equations; report the first failing hbar order."""
    lhs, rhs = _lhs_rhs(H, F)
    diff = vec_sub(lhs, rhs)
    left, right = counit_sides(H, F)
    one = H.h_unit()
    bad_left = vec_sub(left, one)
    bad_right = vec_sub(right, one)
    orders = [o for o in (first_order(bad_left), first_order(bad_right)) if o is not None]
    return TwistorVerdict(
        twistor_order=first_order(diff),
        counit_order=min(orders) if orders else None,
        twistor_residual=diff,
        counit_residual={"left": bad_left, "right": bad_right},
    )


def trivial_twistor(H: HopfAlgebroid) -> Vec:
    return H.tp_unit(2)


def exponential_twistor(H, i: int = 0, j: int = 1, order: Optional[int] = None) -> Vec:
    """exp(hbar d_i (x) d_j) in a polynomial Weyl model, truncated to the window."""
    top = H.order if order is None else order
    z = H.zero_multi
    out: Vec = {}
    fact = 1
    for k in range(top + 1):
        if k:
            fact *= k
        bi = tuple(k if t == i else 0 for t in range(H.d))
        bj = tuple(k if t == j else 0 for t in range(H.d))
        out[(k, (z, (((), bi), ((), bj))))] = Fraction(1, fact)
    return out


class TwistedAlgebroid:
    """H_F over R_F = (R, star_F), with tensors over R_F stored as lifts."""

    def __init__(self, H: HopfAlgebroid, F: Vec, *, check: bool = True, mutation: Optional[str] = None, max_iter: Optional[int] = None):
        self.H = H
        self.F = dict(F)
        self.mutation = mutation
        self.name = f"{H.name}_F"
        self.max_iter = max_iter if max_iter is not None else (H.order or 0) - H.vmin + 4
        self._Flift = H.lift(self.F, 2)
        self._memo: Dict = {}
        if check:
            verdict = check_twistor(H, self.F)
            if not verdict.ok:
                raise ValueError(f"not a twistor: {({k: verdict[k] for k in ('twistor_order', 'counit_order')})}")
            lead = {k: c for k, c in self.F.items() if k[0] <= 0}
            if lead != {k: c for k, c in H.tp_unit(2).items()}:
                raise ValueError("only formal twistors F = 1 (x) 1 + O(hbar) are supported")

    # -- base ring --------------------------------------------------------------
    def star(self, a: Vec, b: Vec) -> Vec:
        H = self.H
        out: Vec = {}
        for (v, (f1, f2)), c in self._Flift.items():
            left = H.action({(v, f1): Fraction(1)}, a)
            right = H.action({(0, f2): Fraction(1)}, b)
            vec_axpy(out, H.r_mul(left, right), c)
        return out

    def alpha_F(self, a: Vec) -> Vec:
        H = self.H
        out: Vec = {}
        for (v, (f1, f2)), c in self._Flift.items():
            vec_axpy(out, H.h_mul(H.alpha(H.action({(v, f1): Fraction(1)}, a)), {(0, f2): Fraction(1)}), c)
        return out

    def beta_F(self, a: Vec) -> Vec:
        H = self.H
        out: Vec = {}
        for (v, (f1, f2)), c in self._Flift.items():
            vec_axpy(out, H.h_mul(H.beta(H.action({(0, f2): Fraction(1)}, a)), {(v, f1): Fraction(1)}), c)
        return out

    def action_F(self, x: Vec, a: Vec) -> Vec:
        H = self.H
        return H.eps(H.h_mul(x, self.alpha_F(a)))

    # -- F-sharp ----------------------------------------------------------------
    def fsharp(self, lift: Vec, n: int) -> Vec:
        """F{F{..F{x_1, x_2}, ..}, x_n} on each pure tensor of the lift."""
        H = self.H
        if n == 0:
            return dict(lift)
        if n == 1:
            return H.pack(lift)
        out: Vec = {}
        for (v, hks), c in lift.items():
            img = self._fsharp_basis(hks)
            vec_axpy(out, H.truncate(vec_shift(img, v)), c)
        return out

    def _fsharp_basis(self, hks):
        key = ("fs", hks)
        hit = self._memo.get(key)
        if hit is None:
            H = self.H
            G = H.tp1({(0, hks[0]): Fraction(1)})
            for k in range(1, len(hks)):
                _, G = H.gamma(self.F, 2, [(k, G), (1, H.tp1({(0, hks[k]): Fraction(1)}))])
            hit = G
            self._memo[key] = hit
        return hit

    def fsharp_chain(self, lift: Vec, n: int) -> Vec:
        """F-sharp through (F_{1^..^n-1,n} ... F_{1^2,3} F_{1,2}) . (x_1 (x) ... (x) x_n)."""
        H = self.H
        if n <= 1:
            return self.fsharp(lift, n)
        chain = self.F
        for k in range(3, n + 1):
            dk = self._delta_left(self.F, k - 1)  # (Delta^{k-2} (x) id) F
            chain = H.tp_mul(dk, H.concat2(chain, k - 1, H.tp1(H.h_unit()), 1), k)
        return H.right_action(chain, n, lift)

    def _delta_left(self, F: Vec, k: int) -> Vec:
        H = self.H
        out: Vec = {}
        for (v, (f1, f2)), c in H.lift(F, 2).items():
            left = H.delta_n({(v, f1): Fraction(1)}, k - 1)
            vec_axpy(out, H.concat2(left, k - 1, H.tp1({(0, f2): Fraction(1)}), 1), c)
        return out

    def fsharp_inverse(self, u: Vec, n: int) -> Vec:
        """A lift w with F-sharp(w) = u, found order by order in hbar."""
        H = self.H
        if n == 0:
            return dict(u)
        w = H.lift(u, n)
        if self.mutation == "fsharp_inverse":
            return w
        r = vec_sub(u, self.fsharp(w, n))
        steps = 0
        while r:
            steps += 1
            if steps > self.max_iter:
                raise WindowError("F-sharp inversion did not settle inside the window")
            vec_axpy(w, H.lift(r, n))
            r = vec_sub(u, self.fsharp(w, n))
        return w

    def normalize(self, lift: Vec, n: int) -> Vec:
        """A short representative of the same class."""
        if n <= 1:
            return self.H.lift(self.H.pack(lift), n) if n == 1 else dict(lift)
        return self.fsharp_inverse(self.fsharp(lift, n), n)

    # -- coproduct ----------------------------------------------------------------
    def delta_F(self, x: Vec) -> Vec:
        H = self.H
        return self.fsharp_inverse(H.tp_mul(H.delta(x), self.F, 2), 2)

    def delta_F_n(self, x: Vec, k: int) -> Vec:
        H = self.H
        if k == -1:
            return H.eps(x)
        if k == 0:
            return {(v, (h,)): c for (v, h), c in x.items()}
        out: Vec = {}
        for (v, h), c in x.items():
            vec_axpy(out, H.truncate(vec_shift(self._delta_F_n_basis(h, k), v)), c)
        return out

    def _delta_F_n_basis(self, h, k):
        key = ("dn", h, k)
        hit = self._memo.get(key)
        if hit is None:
            d = self.delta_F({(0, h): Fraction(1)})
            if k == 1:
                hit = d
            else:
                hit = {}
                for (v, (h1, h2)), c in d.items():
                    left = self.delta_F_n({(v, h1): Fraction(1)}, k - 1)
                    for (w, hks), c2 in left.items():
                        vec_axpy(hit, {(w, hks + (h2,)): c * c2})
            self._memo[key] = hit
        return hit

    # -- lift algebra -------------------------------------------------------------
    def lift_mul(self, a: Vec, b: Vec) -> Vec:
        """Slotwise product of two lifts of the same length."""
        H = self.H
        out: Vec = {}
        for (v1, h1), c1 in a.items():
            for (v2, h2), c2 in b.items():
                v = v1 + v2
                if not H._keep(v):
                    continue
                slots = [H._cached("hm", (x, y), lambda x=x, y=y: H.h_mul_basis(x, y)) for x, y in zip(h1, h2)]
                for combo in itertools.product(*[list(s.items()) for s in slots]):
                    c = c1 * c2
                    for _, x in combo:
                        c *= x
                    vec_axpy(out, {(v, tuple(k for k, _ in combo)): c})
        return out

    def slot_left_mul(self, h: Vec, u: Vec, n: int, i: int) -> Vec:
        out: Vec = {}
        H = self.H
        for (v, hks), c in u.items():
            for (w, hk), ch in h.items():
                if not H._keep(v + w):
                    continue
                for k2, c2 in H._cached("hm", (hk, hks[i - 1]), lambda hk=hk, x=hks[i - 1]: H.h_mul_basis(hk, x)).items():
                    vec_axpy(out, {(v + w, hks[: i - 1] + (k2,) + hks[i:]): c * ch * c2})
        return out

    def concat(self, pieces: Sequence[Tuple[int, Vec]]) -> Tuple[int, Vec]:
        H = self.H
        result: Optional[Tuple[int, Vec]] = None
        pending: Optional[Vec] = None
        for n, x in pieces:
            if n == 0:
                pending = x if pending is None else self.star(pending, x)
                continue
            if pending is not None:
                x = self.slot_left_mul(self.alpha_F(pending), x, n, 1)
                pending = None
            if result is None:
                result = (n, x)
            else:
                m, y = result
                out: Vec = {}
                for (v1, h1), c1 in y.items():
                    for (v2, h2), c2 in x.items():
                        if H._keep(v1 + v2):
                            vec_axpy(out, {(v1 + v2, h1 + h2): c1 * c2})
                result = (m + n, out)
        if result is None:
            return 0, (pending if pending is not None else H.r_unit())
        if pending is not None:
            n, x = result
            result = (n, self.slot_left_mul(self.beta_F(pending), x, n, n))
        return result

    def insert_F(self, h: Vec, u: Vec, k: int) -> Vec:
        if k == 0:
            return self.action_F(h, u)
        return self.lift_mul(self.delta_F_n(h, k - 1), u)

    def gamma_F(self, h: Vec, n: int, us: Sequence[Tuple[int, Vec]]) -> Tuple[int, Vec]:
        if n == 0:
            return 0, dict(h)
        H = self.H
        total = sum(k for k, _ in us)
        out: Vec = {}
        for (v, hks), c in h.items():
            pieces = [(k, self.insert_F({(0, hk): Fraction(1)}, u, k)) for hk, (k, u) in zip(hks, us)]
            _, val = self.concat(pieces)
            vec_axpy(out, H.truncate(vec_shift(val, v)), c)
        return total, self.normalize(out, total) if total >= 2 and len(out) > 24 else out

    # -- samplers -------------------------------------------------------------------
    def sample_lift(self, rng, n: int, size: int) -> Vec:
        H = self.H
        if n == 0:
            return H.sample_r(rng, size)
        out: Vec = {}
        for _ in range(rng.randint(1, max(size, 1))):
            hks = tuple(H.sample_h_key(rng) for _ in range(n))
            vec_axpy(out, {(H.sample_v(rng), hks): H.sample_coeff(rng)})
        return out

    def unit_lift(self, n: int) -> Vec:
        H = self.H
        if n == 0:
            return H.r_unit()
        out: Vec = {}
        for keys, c in _unit_terms(H, n):
            vec_axpy(out, {(0, keys): c})
        return out


def _unit_terms(H: HopfAlgebroid, n: int):
    items = list(H.h_unit().items())
    for combo in itertools.product(items, repeat=n):
        c = Fraction(1)
        for _, x in combo:
            c *= x
        yield tuple(k[1] for k, _ in combo), c


# ---------------------------------------------------------------------------
# the two brace algebras


def type_I_operad(TA: TwistedAlgebroid, max_arity: int = 3) -> OperadModel:
    label = TA.name

    def gamma(x: OperadElement, ys):
        arity, val = TA.gamma_F(x.terms, x.arity, [(y.arity, y.terms) for y in ys])
        return OperadElement(arity, val, label)

    def sample(rng, arity, size):
        return OperadElement(arity, TA.sample_lift(rng, arity, size), label)

    def canon(x: OperadElement):
        return TA.fsharp(x.terms, x.arity)

    ident = OperadElement(1, TA.unit_lift(1), label)
    return OperadModel(label, ident, sample, gamma=gamma, canon=canon, max_arity=max_arity, info={"twisted": TA})


def build_type_I(TA: TwistedAlgebroid, mutation: Optional[str] = None, check: bool = True) -> BraceAlgebra:
    P = type_I_operad(TA)
    m = OperadElement(2, TA.unit_lift(2), P.name)
    return BraceAlgebra(P, m, check=check, mutation=mutation)


def build_type_II(TA: TwistedAlgebroid, mutation: Optional[str] = None, check: bool = True) -> BraceAlgebra:
    P = operad_model(TA.H)
    return BraceAlgebra(P, OperadElement(2, dict(TA.F), P.name), check=check, mutation=mutation)


def fsharp_morphism(TA: TwistedAlgebroid, src: BraceAlgebra, tgt: BraceAlgebra) -> StrictMorphism:
    def apply(x: OperadElement) -> OperadElement:
        return OperadElement(x.arity, TA.fsharp(x.terms, x.arity), tgt.model.name)

    return StrictMorphism(src, tgt, apply)


def verify_two_types(TA: TwistedAlgebroid, trials: int = 20, seed: int = 0, degree: int = 2, size: int = 2) -> Report:
    """F-sharp is an operad isomorphism P_{H_F} -> P_H and a strict B-infinity map."""
    H = TA.H
    rep = Report(f"two_types[{H.name}]", config={"seed": seed, "trials": trials, "degree": degree, "order": H.order})
    t1 = build_type_I(TA, check=False)
    t2 = build_type_II(TA, check=False)
    for label, alg in (("type_I", t1), ("type_II", t2)):
        mm = alg.brace(alg.m, [alg.m])
        rep.record(f"{label}_multiplication", alg.model.is_zero(mm), "unit", None, mm, 0)
    f2 = TA.fsharp(TA.unit_lift(2), 2)
    rep.record("fsharp_unit_square", f2 == TA.F, "unit", None, f2, TA.F)
    rep.record("fsharp_unit", TA.fsharp(TA.unit_lift(1), 1) == H.tp1(H.h_unit()), "unit")
    for t in range(trials):
        rng = sample_rng(seed, t, "two-types")
        rep.trials += 1
        n = rng.randint(1, degree)
        h = TA.sample_lift(rng, n, size)
        us = [(k, TA.sample_lift(rng, k, size)) for k in (rng.randint(0, degree) for _ in range(n))]
        arity, lhs = TA.gamma_F(h, n, us)
        lhs = TA.fsharp(lhs, arity)
        _, rhs = H.gamma(TA.fsharp(h, n), n, [(k, TA.fsharp(u, k)) for k, u in us])
        rep.record("operad_gamma", lhs == rhs, t, {"h": h, "us": us}, lhs, rhs)

        k = rng.randint(1, degree)
        x = H.sample_h(rng, size)
        u = TA.sample_lift(rng, k, size)
        lhs = TA.fsharp(TA.insert_F(x, u, k), k)
        rhs = H.insert(x, TA.fsharp(u, k), k)
        rep.record("insert_intertwines", lhs == rhs, t, {"x": x, "u": u}, lhs, rhs)
        w = TA.sample_lift(rng, k, size)
        back = TA.fsharp(TA.fsharp_inverse(TA.fsharp(w, k), k), k)
        rep.record("fsharp_roundtrip", back == TA.fsharp(w, k), t, {"w": w})
    sm = fsharp_morphism(TA, t1, t2).check(trials=trials, seed=seed, degree=degree, size=size)
    rep.merge(sm)
    return rep


def check_twisted_axioms(TA: TwistedAlgebroid, trials: int = 10, seed: int = 0, size: int = 2) -> Report:
    """Structural facts about R_F and H_F, checked on samples."""
    H = TA.H
    rep = Report(f"twisted[{H.name}]", config={"seed": seed, "trials": trials})
    one_r = H.r_unit()
    one_h = H.h_unit()
    rep.record("delta_F_unit", TA.fsharp(TA.delta_F(one_h), 2) == TA.F, "unit")
    for t in range(trials):
        rng = sample_rng(seed, t, "twisted")
        rep.trials += 1
        a, b, c = (H.sample_r(rng, size) for _ in range(3))
        lhs = TA.star(TA.star(a, b), c)
        rhs = TA.star(a, TA.star(b, c))
        rep.record("star_assoc", lhs == rhs, t, {"a": a, "b": b, "c": c}, lhs, rhs)
        rep.record("star_unit", TA.star(one_r, a) == a and TA.star(a, one_r) == a, t, {"a": a})
        lhs, rhs = TA.alpha_F(TA.star(a, b)), H.h_mul(TA.alpha_F(a), TA.alpha_F(b))
        rep.record("alpha_F_hom", lhs == rhs, t, {"a": a, "b": b}, lhs, rhs)
        lhs, rhs = TA.beta_F(TA.star(a, b)), H.h_mul(TA.beta_F(b), TA.beta_F(a))
        rep.record("beta_F_antihom", lhs == rhs, t, {"a": a, "b": b}, lhs, rhs)
        lhs, rhs = H.h_mul(TA.alpha_F(a), TA.beta_F(b)), H.h_mul(TA.beta_F(b), TA.alpha_F(a))
        rep.record("alpha_beta_F_commute", lhs == rhs, t, {"a": a, "b": b}, lhs, rhs)
        lhs = H.right_action(TA.F, 2, [TA.beta_F(a), one_h])
        rhs = H.right_action(TA.F, 2, [one_h, TA.alpha_F(a)])
        rep.record("F_balanced", lhs == rhs, t, {"a": a}, lhs, rhs)

        x, y = H.sample_h(rng, size), H.sample_h(rng, size)
        dx = TA.delta_F(x)
        # counit over R_F
        left: Vec = {}
        right: Vec = {}
        for (v, (h1, h2)), cc in dx.items():
            vec_axpy(left, H.h_mul(TA.alpha_F(H.eps({(v, h1): Fraction(1)})), {(0, h2): Fraction(1)}), cc)
            vec_axpy(right, H.h_mul(TA.beta_F(H.eps({(0, h2): Fraction(1)})), {(v, h1): Fraction(1)}), cc)
        rep.record("counit_F", left == H.truncate(x) and right == H.truncate(x), t, {"x": x}, left, right)
        lhs = TA.fsharp(TA.delta_F(H.h_mul(x, y)), 2)
        rhs = TA.fsharp(TA.lift_mul(dx, TA.delta_F(y)), 2)
        rep.record("delta_F_multiplicative", lhs == rhs, t, {"x": x, "y": y}, lhs, rhs)
        lhs = TA.fsharp(TA.delta_F_n(x, 2), 3)
        alt: Vec = {}
        for (v, (h1, h2)), cc in dx.items():
            for (w, (k2, k3)), c2 in TA.delta_F({(0, h2): Fraction(1)}).items():
                vec_axpy(alt, {(v + w, (h1, k2, k3)): cc * c2})
        rhs = TA.fsharp(H.truncate(alt), 3)
        rep.record("delta_F_coassociative", lhs == rhs, t, {"x": x}, lhs, rhs)
        l1 = TA.fsharp(TA.lift_mul(dx, _pair(TA.beta_F(a), one_h)), 2)
        r1 = TA.fsharp(TA.lift_mul(dx, _pair(one_h, TA.alpha_F(a))), 2)
        rep.record("delta_F_balanced", l1 == r1, t, {"x": x, "a": a}, l1, r1)
    return rep


def _pair(x: Vec, y: Vec) -> Vec:
    out: Vec = {}
    for (v1, h1), c1 in x.items():
        for (v2, h2), c2 in y.items():
            vec_axpy(out, {(v1 + v2, (h1, h2)): c1 * c2})
    return out
