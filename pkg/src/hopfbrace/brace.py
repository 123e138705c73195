"""Braces, cup product and differential built from an operad with multiplication.

An element of arity n sits in degree n; sign rules use the shifted degree n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from .operad import (
    Multiplication,
    OperadElement,
    OperadError,
    OperadModel,
    OperadMorphism,
    insert_at,
)
from .coeff import vec_axpy
from .reporting import Report, sample_rng

__all__ = [
    "BraceAlgebra",
    "brace_eval",
    "check_brace_binf_axioms",
    "strict_morphism_from_operad",
    "StrictMorphism",
    "prejacobi_terms",
]

BraceElement = OperadElement


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def brace_eval(model: OperadModel, x: BraceElement, ys: Sequence[BraceElement], mutation: Optional[str] = None) -> BraceElement:
    """x{y_1, ..., y_k}: signed sum over all ways of inserting the y's into x."""
    k = len(ys)
    if k == 0:
        return x
    n = x.arity
    out_arity = n + sum(y.arity - 1 for y in ys)
    if n < k:
        return model.zero(out_arity)
    terms = {}
    for slots in combinations(range(1, n + 1), k):
        e = 0
        before = 0
        for p, (s, y) in enumerate(zip(slots, ys)):
            ids_before = s - 1 - p
            i_p = ids_before + before
            if mutation == "brace_sign":
                e += i_p * y.arity
            else:
                e += i_p * (y.arity - 1)
            before += y.arity
        val = insert_at(model, x, slots, ys)
        vec_axpy(terms, val.terms, _sign(e))
    return OperadElement(out_arity, terms, model.name)


class BraceAlgebra:
    """W_P with braces, and with a multiplication the full brace B-infinity structure."""

    def __init__(self, model: OperadModel, m: Optional[OperadElement] = None, *, check: bool = True, mutation: Optional[str] = None):
        self.model = model
        self.mutation = mutation
        self.m = m
        if m is not None and check:
            Multiplication(model, m, check=False)
            mm = self.brace(m, [m])
            if not model.is_zero(mm):
                raise OperadError("m{m} != 0, not a multiplication")

    def brace(self, x: BraceElement, ys: Sequence[BraceElement]) -> BraceElement:
        return brace_eval(self.model, x, ys, self.mutation)

    def _need_m(self):
        if self.m is None:
            raise OperadError("no multiplication installed")
        return self.m

    def cup(self, x: BraceElement, y: BraceElement) -> BraceElement:
        m = self._need_m()
        return self.brace(m, [x, y]).scale(_sign(x.arity))

    def differential(self, x: BraceElement) -> BraceElement:
        m = self._need_m()
        return self.brace(m, [x]) - self.brace(x, [m]).scale(_sign(x.arity + 1))

    def bracket(self, x: BraceElement, y: BraceElement) -> BraceElement:
        return self.brace(x, [y]) - self.brace(y, [x]).scale(_sign((x.arity + 1) * (y.arity + 1)))

    def shifted_bracket(self, x: BraceElement, y: BraceElement) -> BraceElement:
        """Bracket of the dg Lie algebra W[1]; its differential is minus delta."""
        return self.bracket(x, y).scale(_sign(x.arity))

    def sample(self, rng, degree: int, size: int) -> BraceElement:
        return self.model.sample(rng, degree, size)

    def equal(self, a: BraceElement, b: BraceElement) -> bool:
        return self.model.equal(a, b)


def gerstenhaber_bracket(alg: BraceAlgebra, x, y):
    return alg.bracket(x, y)


def dg_lie_shift_bracket(alg: BraceAlgebra, x, y):
    return alg.shifted_bracket(x, y)


def cup(alg: BraceAlgebra, x, y):
    return alg.cup(x, y)


def differential(alg: BraceAlgebra, x):
    return alg.differential(x)


def _block_layouts(n: int, m: int) -> Iterator[List[Tuple[int, int]]]:
    """All (i_p, r_p) with i_1 + r_1 <= i_2, ..., i_n + r_n <= m, every entry >= 0.

    i_p counts the z's placed before y_p, r_p the z's fed into y_p.
    """

    def rec(p, start):
        if p == n:
            yield []
            return
        for i in range(start, m + 1):
            for r in range(0, m - i + 1):
                for rest in rec(p + 1, i + r):
                    yield [(i, r)] + rest

    yield from rec(0, 0)


def prejacobi_terms(alg: BraceAlgebra, x, ys, zs) -> BraceElement:
    """Right-hand side of the higher pre-Jacobi identity for x{ys}{zs}."""
    n, m = len(ys), len(zs)
    out_arity = x.arity + sum(y.arity - 1 for y in ys) + sum(z.arity - 1 for z in zs)
    acc = alg.model.zero(out_arity)
    for layout in _block_layouts(n, m):
        args = []
        cursor = 0
        e = 0
        for (i, r), y in zip(layout, ys):
            args.extend(zs[cursor:i])
            e += (y.arity - 1) * sum(z.arity - 1 for z in zs[:i])
            args.append(alg.brace(y, zs[i : i + r]))
            cursor = i + r
        args.extend(zs[cursor:])
        term = alg.brace(x, args)
        acc = acc + term.scale(_sign(e))
    return acc


def _homotopy_sides(alg: BraceAlgebra, x, xs):
    """Both sides of the higher homotopy relation for x{x_1..x_n}, n >= 1."""
    d, dot, br = alg.differential, alg.cup, alg.brace
    n = len(xs)
    sh = [a.arity - 1 for a in xs]
    lhs = d(br(x, xs)) - br(d(x), xs)
    for i in range(n):
        e = x.arity + 1 + sum(sh[:i])
        args = list(xs)
        args[i] = d(xs[i])
        lhs = lhs - br(x, args).scale(_sign(e))
    rhs = dot(xs[0], br(x, xs[1:])).scale(_sign(x.arity * (xs[0].arity + 1)))
    for i in range(n - 1):
        e = x.arity + 1 + sum(sh[: i + 1])
        args = list(xs[:i]) + [dot(xs[i], xs[i + 1])] + list(xs[i + 2 :])
        rhs = rhs - br(x, args).scale(_sign(e))
    e = x.arity + 1 + sum(sh[: n - 1])
    rhs = rhs + dot(br(x, xs[: n - 1]), xs[n - 1]).scale(_sign(e))
    return lhs, rhs


def _distributivity_sides(alg: BraceAlgebra, x1, x2, ys):
    lhs = alg.brace(alg.cup(x1, x2), ys)
    rhs = alg.model.zero(lhs.arity)
    for k in range(len(ys) + 1):
        e = x2.arity * sum(y.arity - 1 for y in ys[:k])
        rhs = rhs + alg.cup(alg.brace(x1, ys[:k]), alg.brace(x2, ys[k:])).scale(_sign(e))
    return lhs, rhs


def check_brace_binf_axioms(
    alg: BraceAlgebra,
    trials: int = 20,
    seed: int = 0,
    degree: int = 3,
    size: int = 2,
    delta_samples: Optional[int] = None,
    prejacobi_shapes: Sequence[Tuple[int, int]] = ((1, 1), (1, 2), (2, 1), (2, 2)),
    max_args: int = 3,
    degree_cap: Optional[Callable[[str], int]] = None,
) -> Report:
    """Exact checks of the brace B-infinity axioms on sampled homogeneous elements.

    ``degree_cap(check)`` may lower the degree bound for the costliest checks.
    """
    model = alg.model
    rep = Report(f"binf[{model.name}]", config={"seed": seed, "trials": trials, "degree": degree})
    cap = degree_cap or (lambda name: degree)

    def draw(rng, name):
        return alg.sample(rng, rng.randint(0, cap(name)), size)

    nd = trials if delta_samples is None else delta_samples
    for t in range(nd):
        rng = sample_rng(seed, t, "delta")
        x = draw(rng, "delta")
        dd = alg.differential(alg.differential(x))
        rep.record("delta_squared", model.is_zero(dd), t, {"x": x}, dd, 0)

    for t in range(trials):
        rng = sample_rng(seed, t, "binf")
        rep.trials += 1
        x = draw(rng, "unit")
        rep.record("brace_unit", alg.equal(alg.brace(x, []), x), t, {"x": x})

        a, b, c = (draw(rng, "assoc") for _ in range(3))
        lhs, rhs = alg.cup(alg.cup(a, b), c), alg.cup(a, alg.cup(b, c))
        rep.record("cup_assoc", alg.equal(lhs, rhs), t, {"a": a, "b": b, "c": c}, lhs, rhs)
        lhs = alg.differential(alg.cup(a, b))
        rhs = alg.cup(alg.differential(a), b) + alg.cup(a, alg.differential(b)).scale(_sign(a.arity))
        rep.record("leibniz", alg.equal(lhs, rhs), t, {"a": a, "b": b}, lhs, rhs)

        for (n, m) in prejacobi_shapes:
            x = draw(rng, "prejacobi")
            ys = [draw(rng, "prejacobi") for _ in range(n)]
            zs = [draw(rng, "prejacobi") for _ in range(m)]
            lhs = alg.brace(alg.brace(x, ys), zs)
            rhs = prejacobi_terms(alg, x, ys, zs)
            rep.record(f"prejacobi_{n}_{m}", alg.equal(lhs, rhs), t, {"x": x, "ys": ys, "zs": zs}, lhs, rhs)

        nargs = 1 + t % max_args
        x1, x2 = draw(rng, "distributivity"), draw(rng, "distributivity")
        ys = [draw(rng, "distributivity") for _ in range(nargs)]
        lhs, rhs = _distributivity_sides(alg, x1, x2, ys)
        rep.record(f"distributivity_{nargs}", alg.equal(lhs, rhs), t, {"x1": x1, "x2": x2, "ys": ys}, lhs, rhs)

        x = draw(rng, "homotopy")
        xs = [draw(rng, "homotopy") for _ in range(nargs)]
        lhs, rhs = _homotopy_sides(alg, x, xs)
        rep.record(f"homotopy_{nargs}", alg.equal(lhs, rhs), t, {"x": x, "xs": xs}, lhs, rhs)
    return rep


@dataclass
class StrictMorphism:
    """A degree-wise map W_1 -> W_2 that intertwines delta, cup and all braces."""

    source: BraceAlgebra
    target: BraceAlgebra
    apply: Callable[[BraceElement], BraceElement]

    def __call__(self, x):
        return self.apply(x)

    def check(self, trials: int = 10, seed: int = 0, degree: int = 2, size: int = 2, max_args: int = 2) -> Report:
        src, tgt, f = self.source, self.target, self.apply
        rep = Report("strict_morphism", config={"seed": seed, "trials": trials})
        for t in range(trials):
            rng = sample_rng(seed, t, "strict")
            rep.trials += 1
            x = src.sample(rng, rng.randint(0, degree), size)
            y = src.sample(rng, rng.randint(0, degree), size)
            lhs, rhs = f(src.differential(x)), tgt.differential(f(x))
            rep.record("differential", tgt.equal(lhs, rhs), t, {"x": x}, lhs, rhs)
            lhs, rhs = f(src.cup(x, y)), tgt.cup(f(x), f(y))
            rep.record("cup", tgt.equal(lhs, rhs), t, {"x": x, "y": y}, lhs, rhs)
            k = 1 + t % max_args
            ys = [src.sample(rng, rng.randint(0, degree), size) for _ in range(k)]
            lhs, rhs = f(src.brace(x, ys)), tgt.brace(f(x), [f(y) for y in ys])
            rep.record(f"brace_{k}", tgt.equal(lhs, rhs), t, {"x": x, "ys": ys}, lhs, rhs)
        return rep


def strict_morphism_from_operad(f: OperadMorphism, m1: OperadElement, m2: OperadElement) -> StrictMorphism:
    if not f.target.equal(f(m1), m2):
        raise OperadError("f(m1) != m2")
    return StrictMorphism(BraceAlgebra(f.source, m1, check=False), BraceAlgebra(f.target, m2, check=False), f.apply)
