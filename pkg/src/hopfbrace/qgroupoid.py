"""The quantum groupoid U(g) (x) D[[hbar]] over polynomial functions on l*.

Polynomials on l* are R-vectors of the underlying PolyDiffAlgebroid, keyed
``(v, (a, ()))`` with ``a`` an exponent multi-index.  Differential operators
are H-vectors keyed ``(v, (a, w, b))`` for lambda^a w d^b.  The n-th tensor
power over R uses the canonical form of that algebroid.

The PBW star product is computed exactly through U(l); operators and
bidifferential operators are read off it by evaluation on monomials.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .coeff import WindowError, vec_axpy, vec_scale, vec_shift, vec_sub
from .hopfalgd import PolyDiffAlgebroid
from .liepair import LiePair, UEnv, sym_bracket, sym_to_u, u_to_sym
from .reporting import Report, sample_rng

__all__ = [
    "QuantumGroupoid",
    "hgl_model",
    "lemma_suite",
    "multi_of",
    "word_of",
]

Vec = Dict[tuple, Fraction]


def word_of(a: Sequence[int]) -> Tuple[int, ...]:
    """Exponent multi-index -> sorted letter word."""
    return tuple(i for i, k in enumerate(a) for _ in range(k))


def multi_of(word: Sequence[int], d: int) -> Tuple[int, ...]:
    out = [0] * d
    for i in word:
        out[i] += 1
    return tuple(out)


def _multis(d: int, top: int) -> List[Tuple[int, ...]]:
    out = []
    for k in range(top + 1):
        for w in itertools.combinations_with_replacement(range(d), k):
            out.append(multi_of(w, d))
    return out


def _below(e: Tuple[int, ...]):
    return itertools.product(*[range(x + 1) for x in e])


def _dmono(b, e) -> Tuple[Fraction, Optional[tuple]]:
    """d^b lambda^e = c lambda^(e-b)."""
    c = 1
    for bi, ei in zip(b, e):
        if bi > ei:
            return Fraction(0), None
        c *= factorial(ei) // factorial(ei - bi)
    return Fraction(c), tuple(ei - bi for bi, ei in zip(b, e))


class QuantumGroupoid:
    """H_(g,l) for a Lie pair, with the PBW and Gutt data up to hbar^order.

    ``slack`` widens the internal window for computations through phi, which
    costs one negative hbar power per U(l) letter.
    """

    def __init__(self, pair: LiePair, order: int = 3, slack: int = 2, mutation: Optional[str] = None,
                 uenv: Optional[UEnv] = None, max_word: int = 1):
        self.pair = pair
        self.U = uenv or UEnv(pair)
        self.d = pair.dim_l
        self.order = order
        self.slack = slack
        self.mutation = mutation
        self.H = PolyDiffAlgebroid(
            self.d, order=order + slack, vmin=-slack, uenv=self.U, name=f"H[{pair.name}]",
            max_fn_degree=1, max_d_order=1, max_word=max_word,
        )
        self.zero = (0,) * self.d
        self._ops: Dict = {}
        self._theta: Dict = {}

    # -- polynomials and U(l) ---------------------------------------------------
    def poly(self, a, c=1, v=0) -> Vec:
        return {(v, (tuple(a), ())): Fraction(c)}

    def lam(self, i: int) -> Vec:
        return self.poly(tuple(1 if t == i else 0 for t in range(self.d)))

    def truncate(self, x: Vec, order: Optional[int] = None) -> Vec:
        top = self.order if order is None else order
        return {k: c for k, c in x.items() if k[0] <= top}

    def pbw_hbar(self, f: Vec) -> Vec:
        """lambda^a -> hbar^|a| pbw(lambda^a), valued in U(l)[[hbar]] keyed (v, word)."""
        out: Vec = {}
        for (v, (a, _)), c in f.items():
            for w, cw in sym_to_u(self.U, word_of(a)).items():
                vec_axpy(out, {(v + sum(a), w): c * cw})
        return out

    def pbw_hbar_inverse(self, u: Vec, laurent: bool = False) -> Vec:
        out: Vec = {}
        for (v, w), c in u.items():
            for s, cs in u_to_sym(self.U, w).items():
                vv = v - len(s)
                if vv < 0 and not laurent:
                    raise WindowError(f"{w} at hbar^{v} is outside the image of pbw_hbar")
                vec_axpy(out, {(vv, (multi_of(s, self.d), ())): c * cs})
        return out

    def u_mul(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for (v1, w1), c1 in x.items():
            for (v2, w2), c2 in y.items():
                for w, c in self.U.mul(w1, w2).items():
                    vec_axpy(out, {(v1 + v2, w): c1 * c2 * c})
        return out

    def star_pbw(self, f: Vec, g: Vec) -> Vec:
        """Exact PBW star product of polynomials (a polynomial in hbar)."""
        return self.pbw_hbar_inverse(self.u_mul(self.pbw_hbar(f), self.pbw_hbar(g)))

    def ad_star(self, i: int, f: Vec) -> Vec:
        """Coadjoint action of l_i on polynomials, a derivation with l_j -> [l_i, l_j]."""
        out: Vec = {}
        for (v, (a, _)), c in f.items():
            for s, cs in sym_bracket(self.U, i, word_of(a)).items():
                vec_axpy(out, {(v, (multi_of(s, self.d), ())): c * cs})
        return out

    def apply_op(self, D: Vec, f: Vec) -> Vec:
        """Apply a differential operator with trivial U(g) part to a polynomial."""
        out: Vec = {}
        for (v1, (a, w, b)), c1 in D.items():
            if w:
                raise ValueError("operator has a U(g) part")
            for (v2, (e, _)), c2 in f.items():
                c, rest = _dmono(b, e)
                if c:
                    vec_axpy(out, {(v1 + v2, (tuple(x + y for x, y in zip(a, rest)), ())): c1 * c2 * c})
        return out

    # -- extraction by evaluation -------------------------------------------------
    def _extract_op(self, fn, upto: int, degree: int) -> Vec:
        """Normal-ordered operator D with D(lambda^e) = fn(e) through hbar^upto."""
        coeffs: Dict[tuple, Vec] = {}
        for e in _multis(self.d, degree):
            val = {k: c for k, c in fn(e).items() if k[0] <= upto}
            for b, cb in coeffs.items():
                c, rest = _dmono(b, e)
                if c:
                    for (v, (a, _)), x in cb.items():
                        vec_axpy(val, {(v, (tuple(p + q for p, q in zip(a, rest)), ())): -c * x})
            scale = Fraction(1)
            for x in e:
                scale *= factorial(x)
            if val:
                coeffs[e] = vec_scale(val, 1 / scale)
        op: Vec = {}
        for b, cb in coeffs.items():
            for (v, (a, _)), c in cb.items():
                op[(v, (a, (), b))] = c
        return op

    def star_operator(self, f: Vec, upto: Optional[int] = None) -> Vec:
        """The operator g -> f star_PBW g, through hbar^upto."""
        top = self.H.order if upto is None else upto
        out: Vec = {}
        for (v, (a, _)), c in f.items():
            key = (a, top - v)
            op = self._ops.get(key)
            if op is None:
                mono = self.poly(a)
                deg = key[1] + 1
                op = self._extract_op(lambda e: self.star_pbw(mono, self.poly(e)), key[1], deg)
                self._assert_order(op, lambda e: self.star_pbw(mono, self.poly(e)), key[1], deg + 1)
                self._ops[key] = op
            vec_axpy(out, vec_shift(op, v), c)
        return out

    def _assert_order(self, op, fn, upto, degree):
        for e in _multis(self.d, degree):
            got = self.apply_op(op, self.poly(e))
            want = {k: c for k, c in fn(e).items() if k[0] <= upto}
            if vec_sub(got, want):
                raise RuntimeError("differential order exceeds the extraction bound")

    def varphi(self, u: Vec) -> Vec:
        """phi on U(l)((hbar)) through the working window: phi(pbw_hbar f) = f star_PBW."""
        out: Vec = {}
        top = self.H.order
        for (v, w), c in u.items():
            f = self.pbw_hbar_inverse({(0, w): Fraction(1)}, laurent=True)
            for (vf, (a, _)), cf in f.items():
                shift = v + vf
                if shift < self.H.vmin:
                    raise WindowError(f"phi needs hbar^{shift}, below the floor {self.H.vmin}")
                if shift > top:
                    continue
                vec_axpy(out, vec_shift(self.star_operator(self.poly(a), top - shift), shift), c * cf)
        return out

    def varphi_generators(self, u: Vec) -> Vec:
        """phi as the algebra map with l_i -> hbar^-1 lambda_i star_PBW."""
        H = self.H
        top = H.order
        out: Vec = {}
        for (v, w), c in u.items():
            k = len(w)
            if v - k < H.vmin:
                raise WindowError(f"phi needs hbar^{v - k}, below the floor {H.vmin}")
            # multiply the nonnegative operators first, then apply hbar^-k
            need = top - v + k
            acc = H.h_unit()
            for i in w:
                acc = self._mul_upto(acc, self.star_operator(self.lam(i), need), need)
            vec_axpy(out, vec_shift(acc, v - k), c)
        return H.truncate(out)

    def _mul_upto(self, x: Vec, y: Vec, top: int) -> Vec:
        H = self.H
        out: Vec = {}
        for (v1, k1), c1 in x.items():
            for (v2, k2), c2 in y.items():
                if v1 + v2 <= top:
                    for k3, c3 in H._cached("hm", (k1, k2), lambda: H.h_mul_basis(k1, k2)).items():
                        vec_axpy(out, {(v1 + v2, k3): c1 * c2 * c3})
        return out

    def coadjoint_field(self, i: int) -> Vec:
        """The vector field sum_jk c_ij^k lambda_k d_j on l*."""
        out: Vec = {}
        for j in range(self.d):
            for k, c in self.pair.bracket(i, j).items():
                a = tuple(1 if t == k else 0 for t in range(self.d))
                b = tuple(1 if t == j else 0 for t in range(self.d))
                vec_axpy(out, {(0, (a, (), b)): c})
        return out

    # -- twistors ----------------------------------------------------------------
    def theta_pbw(self, upto: Optional[int] = None) -> Vec:
        """Theta_PBW in canonical form: sum c(lambda) d^b1 (x)_R d^b2."""
        top = self.H.order if upto is None else upto
        key = ("pbw", top)
        hit = self._theta.get(key)
        if hit is not None:
            return hit
        coeffs: Dict[tuple, Vec] = {}
        pairs = [(e1, e2) for e1 in _multis(self.d, top) for e2 in _multis(self.d, top)]
        pairs.sort(key=lambda p: (sum(p[0]) + sum(p[1]), p))
        for e1, e2 in pairs:
            val = {k: c for k, c in self.star_pbw(self.poly(e1), self.poly(e2)).items() if k[0] <= top}
            for (b1, b2), cb in coeffs.items():
                c1, r1 = _dmono(b1, e1)
                c2, r2 = _dmono(b2, e2)
                if c1 and c2:
                    rest = tuple(p + q for p, q in zip(r1, r2))
                    for (v, (a, _)), x in cb.items():
                        vec_axpy(val, {(v, (tuple(p + q for p, q in zip(a, rest)), ())): -c1 * c2 * x})
            scale = Fraction(1)
            for x in e1 + e2:
                scale *= factorial(x)
            if val:
                coeffs[(e1, e2)] = vec_scale(val, 1 / scale)
        out: Vec = {}
        for (b1, b2), cb in coeffs.items():
            for (v, (a, _)), c in cb.items():
                out[(v, (a, (((), b1), ((), b2))))] = c
        self._theta[key] = out
        return out

    def theta_pbw_eval(self, f: Vec, g: Vec, theta: Optional[Vec] = None) -> Vec:
        theta = self.theta_pbw() if theta is None else theta
        out: Vec = {}
        z = self.zero
        for (v, (a, ((_, b1), (_, b2)))), c in theta.items():
            x = self.apply_op({(v, (a, (), b1)): c}, f)
            y = self.apply_op({(0, (z, (), b2)): Fraction(1)}, g)
            vec_axpy(out, self.H.r_mul(x, y))
        return out

    def theta_gutt(self, upto: Optional[int] = None) -> Vec:
        """sum_k hbar^k/k! sum_I (Theta_PBW)_1 d_I (x)_R l_I (Theta_PBW)_2."""
        top = self.H.order if upto is None else upto
        key = ("gutt", top, self.mutation)
        hit = self._theta.get(key)
        if hit is not None:
            return hit
        out: Vec = {}
        tp = self.theta_pbw(top)
        for k in range(top + 1):
            for I in itertools.product(range(self.d), repeat=k):
                dI = multi_of(I, self.d)
                words = self.U.normal_form(tuple(I))
                for (v, (a, ((_, b1), (_, b2)))), c in tp.items():
                    if v + k > top:
                        continue
                    nb1 = tuple(p + q for p, q in zip(b1, dI))
                    for w, cw in words.items():
                        vec_axpy(out, {(v + k, (a, (((), nb1), (w, b2)))): c * cw / factorial(k)})
        if self.mutation == "theta_gutt_drop2":
            out = {key2: c for key2, c in out.items() if key2[0] != 2}
        self._theta[key] = out
        return out

    def gutt_operator(self, f: Vec, upto: Optional[int] = None) -> Vec:
        """f star_Gutt as an element of H: sum_k hbar^k/k! sum_I (d_I f) star_PBW l_I."""
        top = self.H.order if upto is None else upto
        out: Vec = {}
        for k in range(top + 1):
            for I in itertools.product(range(self.d), repeat=k):
                df: Vec = {}
                for (v, (a, _)), c in f.items():
                    cc, rest = _dmono(multi_of(I, self.d), a)
                    if cc:
                        vec_axpy(df, {(v, (rest, ())): c * cc})
                if not df:
                    continue
                L = self.star_operator(df, top - k)
                for w, cw in self.U.normal_form(tuple(I)).items():
                    word = {(k, (self.zero, w, self.zero)): cw / factorial(k)}
                    vec_axpy(out, self.H.h_mul(L, word))
        return self.H.truncate(out)

    def theta_place(self, theta: Vec, p: int, q: int) -> Vec:
        """(Delta^{p-1} (x) Delta^{q-1}) Theta in the (p+q)-th tensor power."""
        H = self.H
        out: Vec = {}
        for (v, (h1, h2)), c in H.lift(theta, 2).items():
            left = H.delta_n({(v, h1): Fraction(1)}, p - 1)
            right = H.delta_n({(0, h2): Fraction(1)}, q - 1)
            vec_axpy(out, H.concat2(left, p, right, q), c)
        return out

    def theta_chain(self, n: int, theta: Optional[Vec] = None) -> Vec:
        """Theta_{1^..^n-1,n} . ... . Theta_{1,2} in the n-th tensor power (n >= 2)."""
        H = self.H
        theta = self.theta_gutt() if theta is None else theta
        chain = theta
        one = H.tp1(H.h_unit())
        for k in range(3, n + 1):
            chain = H.tp_mul(self.theta_place(theta, k - 1, 1), H.concat2(chain, k - 1, one, 1), k)
        return chain

    def words_tensor(self, words: Sequence[tuple], v: int = 0, c=1) -> Vec:
        z = self.zero
        return self.H.pack({(v, tuple((z, w, z) for w in words)): Fraction(c)})

    def leg_product(self, chain: Vec, n: int) -> Vec:
        """(A_1 (x) .. (x) A_n) . Delta^{n-1}(phi(A_{n+1})) for a chain of degree n >= 1."""
        H = self.H
        out: Vec = {}
        for (v, words), c in chain.items():
            ph = self.varphi({(v, words[-1]): Fraction(1)})
            dph = H.delta_n(ph, n - 1)
            vec_axpy(out, H.tp_mul(self.words_tensor(words[:-1]), dph, n), c)
        return out


def hgl_model(pair: LiePair, order: int = 3, **kw) -> PolyDiffAlgebroid:
    return QuantumGroupoid(pair, order=order, slack=0, **kw).H


# ---------------------------------------------------------------------------
# identity suite


def _random_poly(Q: QuantumGroupoid, rng, degree: int = 3, size: int = 3) -> Vec:
    out: Vec = {}
    monos = _multis(Q.d, degree)
    for _ in range(rng.randint(1, size)):
        vec_axpy(out, Q.poly(rng.choice(monos)), Fraction(rng.choice([-2, -1, 1, 2, 3])))
    return out


def _random_uword(Q: QuantumGroupoid, rng, maxlen: int) -> Vec:
    w = Q.U.sample_word(rng, maxlen, letters=Q.d)
    return {(len(w), w): Fraction(rng.choice([-2, -1, 1, 2]))}


def _eq(Q, x, y, order):
    return not Q.truncate(vec_sub(x, y), order)


def star_commutator_sides(Q: QuantumGroupoid, f: Vec, i: int, order: int) -> Tuple[Vec, Vec]:
    H = Q.H
    Li = Q.star_operator(Q.lam(i), order + 1)
    Lf = Q.star_operator(f, order + 1)
    lhs = vec_sub(H.h_mul(Li, Lf), H.h_mul(Lf, Li))
    rhs = vec_shift(Q.star_operator(Q.ad_star(i, f), order), 1)
    return Q.truncate(lhs, order), Q.truncate(rhs, order)


def star_invariance_sides(Q: QuantumGroupoid, f: Vec, g: Vec, i: int) -> Tuple[Vec, Vec]:
    lhs = Q.ad_star(i, Q.star_pbw(f, g))
    rhs = Q.star_pbw(Q.ad_star(i, f), g)
    vec_axpy(rhs, Q.star_pbw(f, Q.ad_star(i, g)))
    return lhs, rhs


def phi_equivariance_sides(Q: QuantumGroupoid, u: Vec, i: int) -> Tuple[Vec, Vec]:
    H = Q.H
    li = {(0, (i,)): Fraction(1)}
    comm = vec_sub(Q.u_mul(li, u), Q.u_mul(u, li))
    lhs = Q.varphi(comm)
    ph = Q.varphi(u)
    X = Q.coadjoint_field(i)
    rhs = vec_sub(H.h_mul(X, ph), H.h_mul(ph, X))
    return lhs, rhs


def invariant_chain_sides(Q: QuantumGroupoid, chain: Vec, n: int, f: Vec) -> Tuple[Vec, Vec]:
    H = Q.H
    X = Q.leg_product(chain, n)
    G = H.delta_n(Q.gutt_operator(f), n - 1)
    return H.tp_mul(G, X, n), H.tp_mul(X, G, n)


def theta_block_sides(Q: QuantumGroupoid, chain: Vec, m: int, i: int) -> Tuple[Vec, Vec]:
    """Both sides of the Theta commutation with a block 1^(i-1) (x) B, for i >= 2, m >= 1."""
    H = Q.H
    theta = Q.theta_gutt()
    place = Q.theta_place(theta, i - 1, m)
    Y = Q.leg_product(chain, m)
    one = H.tp1(H.h_unit())
    lift = H.concat_lift([(1, one)] * (i - 1) + [(m, Y)])
    lhs = H.right_action(place, i + m - 1, lift)
    Z: Vec = {}
    for (v, words), c in chain.items():
        ph = Q.varphi({(v, words[-1]): Fraction(1)})
        dph = H.delta_n(ph, i + m - 2)
        vec_axpy(Z, H.tp_mul(Q.words_tensor(((),) * (i - 1) + words[:-1]), dph, i + m - 1), c)
    rhs = H.tp_mul(Z, place, i + m - 1)
    return lhs, rhs


def gutt_generator_sides(Q: QuantumGroupoid, i: int) -> Tuple[Vec, Vec]:
    """Theta (lambda_i star (x) 1) against (1 (x) hbar l_i) Theta + Delta(lambda_i star) Theta."""
    H = Q.H
    theta = Q.theta_gutt()
    L = Q.star_operator(Q.lam(i))
    lhs = H.right_action(theta, 2, [L, H.h_unit()])
    z = Q.zero
    hl = H.pack({(1, ((z, (), z), (z, (i,), z))): Fraction(1)})
    rhs = H.tp_mul(hl, theta, 2)
    vec_axpy(rhs, H.tp_mul(H.delta(L), theta, 2))
    return lhs, rhs


def gutt_block_sides(Q: QuantumGroupoid, chain: Vec, k: int) -> Tuple[Vec, Vec]:
    """The Theta_{1^..^k-1,k} form for B of degree k-1 >= 1."""
    H = Q.H
    theta = Q.theta_gutt()
    place = Q.theta_place(theta, k - 1, 1)
    Y = Q.leg_product(chain, k - 1)
    one = H.tp1(H.h_unit())
    lhs = H.right_action(place, k, H.concat_lift([(k - 1, Y), (1, one)]))
    rhs: Vec = {}
    for (v, words), c in chain.items():
        for (w1, w2), cw in Q.U.coproduct(words[-1]).items():
            ph = H.delta_n(Q.varphi({(v, w2): Fraction(1)}), k - 1)
            front = H.tp_mul(Q.words_tensor(words[:-1] + (w1,)), ph, k)
            vec_axpy(rhs, H.tp_mul(front, place, k), c * cw)
    return lhs, rhs


def lemma_suite(pair: LiePair, order: int = 3, trials: int = 30, seed: int = 0,
                Q: Optional[QuantumGroupoid] = None, planted: bool = True) -> Report:
    """Star-product, phi and Theta identities on seeded polynomials and chains, modulo hbar^(order+1)."""
    from .liepair import invariant_basis, sym_to_u_leg

    Q = Q or QuantumGroupoid(pair, order=order, slack=1)
    rep = Report(f"lemmas[{pair.name}]", config={"seed": seed, "trials": trials, "order": order})
    d = Q.d
    chains = {n: [sym_to_u_leg(Q.U, b) for b in invariant_basis(Q.U, n, 2, sym_leg=True)] for n in (1, 2)}
    for t in range(trials):
        rng = sample_rng(seed, t, "lemmas")
        rep.trials += 1
        i = rng.randrange(d)
        f = _random_poly(Q, rng)
        g = _random_poly(Q, rng)
        lhs, rhs = star_commutator_sides(Q, f, i, order)
        rep.record("star_commutator", _eq(Q, lhs, rhs, order), t, {"f": f, "i": i}, lhs, rhs)
        lhs, rhs = star_invariance_sides(Q, f, g, i)
        rep.record("star_invariance", not vec_sub(lhs, rhs), t, {"f": f, "g": g, "i": i}, lhs, rhs)
        u = _random_uword(Q, rng, 2)
        lhs, rhs = phi_equivariance_sides(Q, u, i)
        rep.record("phi_equivariance", _eq(Q, lhs, rhs, order), t, {"u": u, "i": i}, lhs, rhs)

        n = 1 + t % 2
        A = _combo(rng, chains[n])
        fl = Q.lam(i) if t % 3 else _random_poly(Q, rng, 2, 2)
        lhs, rhs = invariant_chain_sides(Q, A, n, fl)
        rep.record("invariant_commutes", _eq(Q, lhs, rhs, order), t, {"A": A, "f": fl}, lhs, rhs)

        m = 1 + (t // 2) % 2
        pos = 2 + t % 2
        B = _combo(rng, chains[m])
        lhs, rhs = theta_block_sides(Q, B, m, pos)
        rep.record("theta_block", _eq(Q, lhs, rhs, order), t, {"B": B, "i": pos}, lhs, rhs)

        lhs, rhs = gutt_generator_sides(Q, i)
        rep.record("gutt_generator", _eq(Q, lhs, rhs, order), t, {"i": i}, lhs, rhs)
        k = 2 + t % 2
        B = _combo(rng, chains[k - 1])
        lhs, rhs = gutt_block_sides(Q, B, k)
        rep.record("gutt_block", _eq(Q, lhs, rhs, order), t, {"B": B, "k": k}, lhs, rhs)
    if planted:
        # a chain that fails invariance must break the commutation
        bad = planted_noninvariant(Q)
        if bad is not None:
            ok = all(_eq(Q, *invariant_chain_sides(Q, bad, 1, Q.lam(i)), order) for i in range(d))
            rep.record("detects_noninvariant", not ok, "planted", {"A": bad})
    return rep


def _combo(rng, basis: List[Vec]) -> Vec:
    out: Vec = {}
    for _ in range(rng.randint(1, 2)):
        vec_axpy(out, rng.choice(basis), Fraction(rng.choice([-2, -1, 1, 2])))
    return out


def planted_noninvariant(Q: QuantumGroupoid) -> Optional[Vec]:
    """A single g-letter chain x (x) 1 with [l, x] != 0, if g has one."""
    from .liepair import check_invariance

    for x in range(Q.pair.dim_g):
        chain = {(0, ((x,), ())): Fraction(1)}
        if not check_invariance(Q.U, chain, 1)[0]:
            return chain
    return None
