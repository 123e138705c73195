"""Lie algebra pairs, PBW straightening, invariant chains and the operad P_(g,l).

Basis vectors of g are numbered 0..dim_g-1 with l spanned by the leading
block 0..dim_l-1.  Elements of U(g) are sparse maps from sorted index words
to rationals.  A chain of degree n is a sparse vector keyed
``(v, (w_1, ..., w_n, w_l))``: n words in U(g), one word in U(l), and the
hbar exponent v.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeff import vec_axpy, vec_scale, vec_shift, vec_sub
from .operad import OperadElement, OperadError, OperadModel
from .reporting import Report, sample_rng

__all__ = [
    "LiePair",
    "UEnv",
    "aff1_pair",
    "sl2_cartan_pair",
    "aff1_full_pair",
    "heisenberg_pair",
    "abelian_pair",
    "pair_from_dict",
    "place",
    "chain_mul",
    "check_invariance",
    "gl_operad",
    "w_gl_structures",
    "wgl_brace_explicit",
    "wgl_differential_explicit",
    "wgl_cup_explicit",
    "adte_sides",
    "adte_check",
    "valuation_check",
    "invariant_basis",
    "random_invariant",
    "unit_chain",
    "sym_to_u_leg",
    "u_to_sym_leg",
]

Word = Tuple[int, ...]
Vec = Dict[tuple, Fraction]


@dataclass
class LiePair:
    """Structure constants ``brackets[(i, j)] = {k: c}`` of g, with l the first dim_l vectors."""

    dim_g: int
    dim_l: int
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]]
    name: str = "pair"
    names: Optional[List[str]] = None

    def __post_init__(self):
        full: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j), out in self.brackets.items():
            clean = {k: Fraction(c) for k, c in out.items() if c}
            if not clean:
                continue
            full[(i, j)] = clean
            back = {k: -c for k, c in clean.items()}
            if (j, i) in self.brackets and {k: Fraction(c) for k, c in self.brackets[(j, i)].items() if c} != back:
                raise ValueError(f"bracket not antisymmetric at {(i, j)}")
            full[(j, i)] = back
        self.brackets = full
        if not 0 < self.dim_l <= self.dim_g:
            raise ValueError("need 0 < dim_l <= dim_g")
        for (i, j), out in full.items():
            if i == j:
                raise ValueError("[x, x] must vanish")
            if i < self.dim_l and j < self.dim_l and any(k >= self.dim_l for k in out):
                raise ValueError("l is not closed under the bracket")
        self._check_jacobi()

    def bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.brackets.get((i, j), {})

    def _check_jacobi(self):
        n = self.dim_g
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    tot: Dict[int, Fraction] = {}
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        for k, c1 in self.bracket(y, z).items():
                            for m, c2 in self.bracket(x, k).items():
                                tot[m] = tot.get(m, 0) + c1 * c2
                    if any(tot.values()):
                        raise ValueError(f"Jacobi identity fails at {(a, b, c)}")

    def label(self, i: int) -> str:
        return self.names[i] if self.names else f"e{i}"

    def to_dict(self) -> dict:
        rows = []
        for (i, j), out in sorted(self.brackets.items()):
            if i < j:
                for k, c in sorted(out.items()):
                    rows.append([i, j, k, f"{c.numerator}/{c.denominator}"])
        return {"name": self.name, "dim_g": self.dim_g, "dim_l": self.dim_l, "brackets": rows, "names": self.names}


def pair_from_dict(data: dict) -> LiePair:
    br: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i, j, k, c in data.get("brackets", []):
        br.setdefault((int(i), int(j)), {})[int(k)] = Fraction(str(c))
    return LiePair(int(data["dim_g"]), int(data["dim_l"]), br, data.get("name", "pair"), data.get("names"))


def aff1_pair() -> LiePair:
    """[x, y] = y with l = span(y); basis (y, x)."""
    return LiePair(2, 1, {(1, 0): {0: Fraction(1)}}, "aff1", ["y", "x"])


def aff1_full_pair() -> LiePair:
    """[x, y] = y with l = g; basis (x, y)."""
    return LiePair(2, 2, {(0, 1): {1: Fraction(1)}}, "aff1full", ["x", "y"])


def sl2_cartan_pair() -> LiePair:
    """sl2 with basis (h, e, f) and l the Cartan line."""
    return LiePair(
        3,
        1,
        {(0, 1): {1: Fraction(2)}, (0, 2): {2: Fraction(-2)}, (1, 2): {0: Fraction(1)}},
        "sl2",
        ["h", "e", "f"],
    )


def heisenberg_pair() -> LiePair:
    """The 3-dimensional Heisenberg algebra [p, q] = z, with l = g."""
    return LiePair(3, 3, {(0, 1): {2: Fraction(1)}}, "heis", ["p", "q", "z"])


def abelian_pair(dim_g: int = 2, dim_l: int = 1) -> LiePair:
    return LiePair(dim_g, dim_l, {}, f"ab{dim_g}{dim_l}")


# ---------------------------------------------------------------------------
# universal enveloping algebra


class UEnv:
    """PBW normal forms in U(g): sorted words, reached by straightening."""

    def __init__(self, pair: LiePair, mutation: Optional[str] = None):
        self.pair = pair
        self.mutation = mutation
        self._nf: Dict[Word, Dict[Word, Fraction]] = {}
        self._mul: Dict[Tuple[Word, Word], Dict[Word, Fraction]] = {}
        self._cop: Dict[Tuple[Word, int], Dict[tuple, Fraction]] = {}
        self._bsign = -1 if mutation == "straightening" else 1

    def normal_form(self, word: Word) -> Dict[Word, Fraction]:
        hit = self._nf.get(word)
        if hit is not None:
            return hit
        for p in range(len(word) - 1):
            a, b = word[p], word[p + 1]
            if a > b:
                out = dict(self.normal_form(word[:p] + (b, a) + word[p + 2 :]))
                for k, c in self.pair.bracket(a, b).items():
                    vec_axpy(out, self.normal_form(word[:p] + (k,) + word[p + 2 :]), self._bsign * c)
                break
        else:
            out = {word: Fraction(1)}
        self._nf[word] = out
        return out

    def mul(self, w1: Word, w2: Word) -> Dict[Word, Fraction]:
        key = (w1, w2)
        hit = self._mul.get(key)
        if hit is None:
            if not w1 or not w2:
                hit = {w1 + w2: Fraction(1)}
            else:
                hit = self.normal_form(w1 + w2)
            self._mul[key] = hit
        return hit

    def multiply(self, a: Dict[Word, Fraction], b: Dict[Word, Fraction]) -> Dict[Word, Fraction]:
        out: Dict[Word, Fraction] = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                vec_axpy(out, self.mul(w1, w2), c1 * c2)
        return out

    def coproduct_n(self, w: Word, n: int) -> Dict[tuple, Fraction]:
        """Delta^n of a sorted word: n+1 tensor factors, shuffle-split."""
        key = (w, n)
        hit = self._cop.get(key)
        if hit is None:
            hit = {}
            if n == -1:
                if not w:
                    hit[()] = Fraction(1)
            else:
                for assign in itertools.product(range(n + 1), repeat=len(w)):
                    parts = tuple(tuple(x for x, s in zip(w, assign) if s == t) for t in range(n + 1))
                    hit[parts] = hit.get(parts, 0) + 1
                hit = {k: Fraction(c) for k, c in hit.items()}
            self._cop[key] = hit
        return hit

    def coproduct(self, w: Word) -> Dict[Tuple[Word, Word], Fraction]:
        return self.coproduct_n(w, 1)

    def counit(self, w: Word) -> Fraction:
        return Fraction(1) if not w else Fraction(0)

    def bracket_word(self, i: int, w: Word) -> Dict[Word, Fraction]:
        """ad_{e_i}(w) = e_i w - w e_i in normal form."""
        out = dict(self.mul((i,), w))
        vec_axpy(out, self.mul(w, (i,)), -1)
        return out

    def sample_word(self, rng, maxlen: int, letters: Optional[int] = None) -> Word:
        top = self.pair.dim_g if letters is None else letters
        k = rng.randint(0, maxlen)
        return tuple(sorted(rng.randrange(top) for _ in range(k)))

    def small_words(self, maxlen: int, letters: Optional[int] = None) -> List[Word]:
        top = self.pair.dim_g if letters is None else letters
        out = []
        for k in range(maxlen + 1):
            out.extend(itertools.combinations_with_replacement(range(top), k))
        return out


# ---------------------------------------------------------------------------
# placements and chain products


def place(U: UEnv, A: Vec, blocks: Sequence[Sequence[int]], total: int) -> Vec:
    """Spread each leg of A over a block of target slots (1-based, ``total`` slots).

    A leg with a block of size q receives Delta^(q-1), an empty block applies
    the counit, and uncovered slots hold 1.  Slot ``total`` is the U(l) slot.
    """
    _check_blocks(blocks, total)
    out: Vec = {}
    for (v, words), c in A.items():
        if len(words) != len(blocks):
            raise OperadError(f"chain has {len(words)} legs, placement has {len(blocks)}")
        parts = [list(U.coproduct_n(w, len(b) - 1).items()) for w, b in zip(words, blocks)]
        for combo in itertools.product(*parts):
            coef = c
            slots: List[Word] = [()] * total
            for (pieces, cc), b in zip(combo, blocks):
                coef *= cc
                for s, piece in zip(b, pieces):
                    slots[s - 1] = piece
            if coef:
                key = (v, tuple(slots))
                y = out.get(key, 0) + coef
                if y:
                    out[key] = y
                else:
                    out.pop(key, None)
    return out


def _check_blocks(blocks, total):
    last = 0
    for b in blocks:
        b = list(b)
        if b:
            if b != list(range(b[0], b[0] + len(b))):
                raise OperadError(f"block {b} is not consecutive")
            if b[0] <= last or b[-1] > total:
                raise OperadError(f"malformed placement {blocks} into {total} slots")
            last = b[-1]
    for b in blocks[:-1]:
        if b and b[-1] == total:
            raise OperadError("a U(g) leg cannot land in the U(l) slot")


def chain_mul(U: UEnv, A: Vec, B: Vec, order: Optional[int] = None, graded: bool = False) -> Vec:
    """Slotwise product of two chains with the same number of slots.

    With ``graded`` a term hbar^v (x) u is dropped once v - len(u) exceeds
    ``order``, len(u) being the length of the U(l) leg.
    """
    out: Vec = {}
    for (v1, w1), c1 in A.items():
        for (v2, w2), c2 in B.items():
            v = v1 + v2
            if order is not None:
                slack = len(w1[-1]) + len(w2[-1]) if graded else 0
                if v - slack > order:
                    continue
            parts = [list(U.mul(a, b).items()) for a, b in zip(w1, w2)]
            for combo in itertools.product(*parts):
                coef = c1 * c2
                for _, x in combo:
                    coef *= x
                key = (v, tuple(w for w, _ in combo))
                if graded and order is not None and v - len(key[1][-1]) > order:
                    continue
                y = out.get(key, 0) + coef
                if y:
                    out[key] = y
                else:
                    out.pop(key, None)
    return out


def unit_chain(n: int) -> Vec:
    return {(0, ((),) * (n + 1)): Fraction(1)}


def check_invariance(U: UEnv, A: Vec, n: int) -> Tuple[bool, Optional[int], Vec]:
    """Delta^n(l_i) A = A Delta^n(l_i) for every basis vector l_i of l.

    Returns (ok, first violating generator, residual).
    """
    for i in range(U.pair.dim_l):
        res = invariance_residual(U, A, n, i)
        if res:
            return False, i, res
    return True, None, {}


def invariance_residual(U: UEnv, A: Vec, n: int, i: int) -> Vec:
    out: Vec = {}
    for (v, words), c in A.items():
        for s, w in enumerate(words):
            for w2, c2 in U.bracket_word(i, w).items():
                key = (v, words[:s] + (w2,) + words[s + 1 :])
                vec_axpy(out, {key: c * c2})
    return out


# ---------------------------------------------------------------------------
# the operad P_(g,l)


def gl_partial(U: UEnv, A: Vec, n: int, i: int, B: Vec, m: int, order: Optional[int] = None, mutation: Optional[str] = None,
               graded: bool = False) -> Vec:
    """A o_i B = A_{1,..,i^..^i+m-1,..,n+m} . B_{i,..,i+m-1, i+m^..^n+m}."""
    if not A or not B:
        # zero chains may carry formal negative degrees from empty braces
        return {}
    if not 1 <= i <= n:
        raise OperadError(f"slot {i} out of range for degree {n}")
    total = n + m
    a_blocks = [(s,) for s in range(1, i)] + [tuple(range(i, i + m))] + [(s + m - 1,) for s in range(i + 1, n + 1)] + [(total,)]
    b_start = i + m
    if mutation == "placement" and b_start < total:
        b_start += 1
    b_blocks = [(i - 1 + t,) for t in range(1, m + 1)] + [tuple(range(b_start, total + 1))]
    return chain_mul(U, place(U, A, a_blocks, total), place(U, B, b_blocks, total), order, graded)


def gl_operad(U: UEnv, order: Optional[int] = 2, max_arity: int = 3, size_words: int = 1, mutation: Optional[str] = None,
              sampler=None, name: Optional[str] = None, graded: bool = False) -> OperadModel:
    """P_(g,l) modulo hbar^(order+1); ``graded`` truncates by v - len(U(l) leg).

    Graded truncation is a quotient only on chains whose U(l) legs carry at
    least their length in hbar powers, such as the pbw_hbar images.
    """
    label = name or f"P[{U.pair.name}]"

    def partial(x: OperadElement, i: int, y: OperadElement) -> OperadElement:
        return OperadElement(x.arity + y.arity - 1, gl_partial(U, x.terms, x.arity, i, y.terms, y.arity, order, mutation, graded), label)

    def sample(rng, arity, size):
        if sampler is not None:
            return OperadElement(arity, sampler(rng, arity, size), label)
        return OperadElement(arity, random_invariant(U, arity, rng, size, order=order), label)

    ident = OperadElement(1, unit_chain(1), label)
    return OperadModel(label, ident, sample, partial=partial, max_arity=max_arity,
                       info={"uenv": U, "order": order, "graded": graded})


def w_gl_structures(U: UEnv, order: Optional[int] = 2, mutation: Optional[str] = None, brace_mutation: Optional[str] = None, **kw):
    from .brace import BraceAlgebra

    P = gl_operad(U, order=order, mutation=mutation, **kw)
    m = OperadElement(2, unit_chain(2), P.name)
    return BraceAlgebra(P, m, check=mutation is None and brace_mutation is None, mutation=brace_mutation)


# ---------------------------------------------------------------------------
# explicit formulas


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def wgl_differential_explicit(U: UEnv, A: Vec, n: int, order: Optional[int] = None) -> Vec:
    total = n + 2
    out: Vec = {}
    blocks = [(s + 1,) for s in range(1, n + 1)] + [(total,)]
    vec_axpy(out, place(U, A, blocks, total), _sign(n - 1))
    for i in range(1, n + 2):
        blocks = []
        for s in range(1, n + 2):
            if s < i:
                blocks.append((s,))
            elif s == i:
                blocks.append((i, i + 1))
            else:
                blocks.append((s + 1,))
        vec_axpy(out, place(U, A, blocks, total), _sign(n - 1 + i))
    return out


def wgl_cup_explicit(U: UEnv, A: Vec, n: int, B: Vec, m: int, order: Optional[int] = None) -> Vec:
    total = n + m + 1
    a_blocks = [(s,) for s in range(1, n + 1)] + [tuple(range(n + 1, total + 1))]
    b_blocks = [(s,) for s in range(n + 1, total + 1)]
    return vec_scale(chain_mul(U, place(U, A, a_blocks, total), place(U, B, b_blocks, total), order), _sign(n * m))


def wgl_brace_explicit(U: UEnv, A: Vec, p: int, Bs: Sequence[Tuple[Vec, int]], order: Optional[int] = None) -> Vec:
    k = len(Bs)
    if k == 0:
        return dict(A)
    if p < k:
        return {}
    qs = [q for _, q in Bs]
    n = p + sum(q - 1 for q in qs)
    out: Vec = {}

    def starts(s, lo, free):
        # choose j_s >= lo leaving room for the remaining blocks
        if s == k:
            yield []
            return
        q = qs[s]
        for j in range(lo, n - sum(qs[s:]) + 2):
            if j + q - 1 > n:
                break
            for rest in starts(s + 1, j + q, free):
                yield [j] + rest

    for js in starts(0, 1, None):
        e = sum((q - 1) * (j - 1) for q, j in zip(qs, js))
        # legs of A: single slots outside the blocks, blocks for the chosen legs
        a_blocks: List[Tuple[int, ...]] = []
        pos = 1
        for j, q in zip(js, qs):
            while pos < j:
                a_blocks.append((pos,))
                pos += 1
            a_blocks.append(tuple(range(j, j + q)))
            pos = j + q
        while pos <= n:
            a_blocks.append((pos,))
            pos += 1
        a_blocks.append((n + 1,))
        if len(a_blocks) != p + 1:
            continue
        term = place(U, A, a_blocks, n + 1)
        for (B, q), j in zip(Bs, js):
            b_blocks = [(j + t,) for t in range(q)] + [tuple(range(j + q, n + 2))]
            term = chain_mul(U, term, place(U, B, b_blocks, n + 1), order)
        vec_axpy(out, term, _sign(e))
    return out


# ---------------------------------------------------------------------------
# ADTE, valuation


def adte_sides(U: UEnv, K: Vec, order: Optional[int] = None, graded: bool = False) -> Tuple[Vec, Vec]:
    """K_{1^2,3,4} K_{1,2,3^4} and K_{1,2^3,4} K_{2,3,4}."""
    lhs = chain_mul(U, place(U, K, [(1, 2), (3,), (4,)], 4), place(U, K, [(1,), (2,), (3, 4)], 4), order, graded)
    rhs = chain_mul(U, place(U, K, [(1,), (2, 3), (4,)], 4), place(U, K, [(2,), (3,), (4,)], 4), order, graded)
    return lhs, rhs


def sym_degree_orders(U: UEnv, X: Vec) -> Dict[int, Vec]:
    """Split X by the grading hbar^v (x) pbw(lambda^a) -> v - |a| on the U(l) leg."""
    out: Dict[int, Vec] = {}
    for (v, words), c in X.items():
        for a, ca in u_to_sym(U, words[-1]).items():
            o = v - len(a)
            vec_axpy(out.setdefault(o, {}), {(v, words[:-1] + (a,)): c * ca})
    return {o: x for o, x in out.items() if x}


def adte_check(U: UEnv, K: Vec, order: int, graded: bool = True) -> dict:
    """Per-order ADTE verdict; ``first_failure`` is the lowest failing order or None.

    With ``graded`` the order of hbar^v (x) u counts v minus the symmetric
    degree of u, matching the order of the corresponding formal twist.
    """
    lhs, rhs = adte_sides(U, K, order, graded)
    diff = vec_sub(lhs, rhs)
    if graded:
        split = sym_degree_orders(U, diff)
    else:
        split = {}
        for key, c in diff.items():
            vec_axpy(split.setdefault(key[0], {}), {key: c})
    bad = sorted(o for o, x in split.items() if x and o <= order)
    first = bad[0] if bad else None
    return {
        "first_failure": first,
        "holds": {k: (first is None or k < first) for k in range(order + 1)},
        "residual": split.get(first, {}) if first is not None else {},
    }


def filtration_residual(U: UEnv, w: Word, n: int) -> Dict[tuple, Fraction]:
    """(id - eta eps)^{(x)(n+1)} Delta^n applied to a word."""
    return {parts: c for parts, c in U.coproduct_n(w, n).items() if all(parts)}


def valuation_check(U: UEnv, K: Vec) -> Tuple[bool, list]:
    """Every hbar^n coefficient has its U(l) legs in U(l)_{<=n}."""
    groups: Dict[Tuple[int, tuple], Dict[Word, Fraction]] = {}
    for (v, words), c in K.items():
        vec_axpy(groups.setdefault((v, words[:-1]), {}), {words[-1]: c})
    bad = []
    for (v, g), u in sorted(groups.items(), key=repr):
        if v < 0:
            bad.append({"order": v, "legs": g})
            continue
        res: Dict[tuple, Fraction] = {}
        for w, c in u.items():
            vec_axpy(res, filtration_residual(U, w, v), c)
        if res:
            bad.append({"order": v, "legs": g, "residual": res})
    return not bad, bad


# ---------------------------------------------------------------------------
# symmetric algebra legs and pbw


def _arrangements(a: Word) -> List[Word]:
    from sympy.utilities.iterables import multiset_permutations

    return [tuple(p) for p in multiset_permutations(list(a))]


def sym_to_u(U: UEnv, a: Word) -> Dict[Word, Fraction]:
    """pbw(lambda^a): the average of all arrangements of the sorted word a."""
    key = ("pbw", a)
    hit = U._nf.get(key)
    if hit is None:
        arr = _arrangements(a) if a else [()]
        hit = {}
        for p in arr:
            vec_axpy(hit, U.normal_form(p), Fraction(1, len(arr)))
        U._nf[key] = hit
    return hit


def u_to_sym(U: UEnv, w: Word) -> Dict[Word, Fraction]:
    """Inverse of pbw on a sorted word, by peeling off the top-length part."""
    key = ("inv", w)
    hit = U._nf.get(key)
    if hit is None:
        hit = {}
        rest = {w: Fraction(1)}
        while rest:
            top = max(len(x) for x in rest)
            lead = {x: c for x, c in rest.items() if len(x) == top}
            for x, c in lead.items():
                vec_axpy(hit, {x: c})
                vec_axpy(rest, sym_to_u(U, x), -c)
        U._nf[key] = hit
    return hit


def sym_to_u_leg(U: UEnv, F: Vec, hbar_weight: bool = True) -> Vec:
    """(id (x) .. (x) pbw_hbar) on the last leg: lambda^a -> hbar^|a| pbw(lambda^a)."""
    out: Vec = {}
    for (v, words), c in F.items():
        a = words[-1]
        shift = len(a) if hbar_weight else 0
        for w, cw in sym_to_u(U, a).items():
            vec_axpy(out, {(v + shift, words[:-1] + (w,)): c * cw})
    return out


def u_to_sym_leg(U: UEnv, K: Vec, hbar_weight: bool = True) -> Vec:
    out: Vec = {}
    for (v, words), c in K.items():
        for a, ca in u_to_sym(U, words[-1]).items():
            shift = len(a) if hbar_weight else 0
            vec_axpy(out, {(v - shift, words[:-1] + (a,)): c * ca})
    return out


def sym_bracket(U: UEnv, i: int, a: Word) -> Dict[Word, Fraction]:
    """ad_{l_i} acting on a commutative monomial of S(l) as a derivation."""
    out: Dict[Word, Fraction] = {}
    for p, x in enumerate(a):
        for k, c in U.pair.bracket(i, x).items():
            mono = tuple(sorted(a[:p] + (k,) + a[p + 1 :]))
            vec_axpy(out, {mono: c})
    return out


# ---------------------------------------------------------------------------
# invariant subspaces by linear algebra


_BASIS_CACHE: Dict[tuple, List[Vec]] = {}


def _monomials(U: UEnv, n: int, max_len: int, sym_leg: bool, min_g: int = 0) -> List[tuple]:
    dg, dl = U.pair.dim_g, U.pair.dim_l
    gwords = U.small_words(max_len, dg)
    lwords = U.small_words(max_len, dl)
    out = []
    for combo in itertools.product(gwords, repeat=n):
        used = sum(len(w) for w in combo)
        if used > max_len or any(len(w) < min_g for w in combo):
            continue
        for wl in lwords:
            if used + len(wl) <= max_len:
                out.append(combo + (wl,))
    return out


def invariant_basis(U: UEnv, n: int, max_len: int = 2, sym_leg: bool = False, min_g: int = 0) -> List[Vec]:
    """Basis of l-invariant chains of degree n with total word length <= max_len.

    With ``sym_leg`` the last leg is read in S(l) (commutative monomials).
    ``min_g`` forces every U(g) leg to have at least that many letters.
    """
    key = (id(U), U.pair.name, n, max_len, sym_leg, min_g, U.mutation)
    hit = _BASIS_CACHE.get(key)
    if hit is not None:
        return hit
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    monos = _monomials(U, n, max_len, sym_leg, min_g)
    rows: Dict[tuple, int] = {}
    cols = []
    for mono in monos:
        col: Dict[int, Fraction] = {}
        for i in range(U.pair.dim_l):
            for s, w in enumerate(mono):
                if sym_leg and s == n:
                    img = sym_bracket(U, i, w)
                else:
                    img = U.bracket_word(i, w)
                for w2, c in img.items():
                    r = rows.setdefault((i, mono[:s] + (w2,) + mono[s + 1 :]), len(rows))
                    col[r] = col.get(r, 0) + c
        cols.append(col)
    if not rows:
        basis = [{(0, mono): Fraction(1)} for mono in monos]
    else:
        mat = [[QQ(0)] * len(monos) for _ in range(len(rows))]
        for j, col in enumerate(cols):
            for r, c in col.items():
                mat[r][j] = QQ(c.numerator, c.denominator)
        dm = DomainMatrix(mat, (len(rows), len(monos)), QQ)
        ns = dm.nullspace().to_Matrix()
        basis = []
        for r in range(ns.rows):
            vec = {}
            for j in range(ns.cols):
                x = ns[r, j]
                if x != 0:
                    vec[(0, monos[j])] = Fraction(int(x.p), int(x.q))
            if vec:
                basis.append(vec)
    _BASIS_CACHE[key] = basis
    return basis


def random_invariant(U: UEnv, n: int, rng, size: int = 2, order: Optional[int] = 2, max_len: int = 2) -> Vec:
    """A random l-invariant chain: small integer combination of basis chains, hbar-shifted."""
    basis = invariant_basis(U, n, max_len)
    out: Vec = {}
    if not basis:
        return out
    top = 0 if order is None else min(order, 1)
    for _ in range(rng.randint(1, max(size, 1))):
        b = basis[rng.randrange(len(basis))]
        vec_axpy(out, vec_shift(b, rng.randint(0, top)), rng.choice([-2, -1, 1, 2]))
    return out
