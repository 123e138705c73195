"""Non-symmetric operads as value-level models.

A model is a record of closures: an identity element, a composition
(full ``gamma`` or partial ``o_i``, whichever is native), a seeded sampler
and a canonical form used for equality.  Keeping models as plain data lets
the test harness swap in corrupted variants and watch the axiom checks fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from .coeff import vec_axpy, vec_scale, vec_sub
from .reporting import Report, sample_rng

__all__ = [
    "OperadElement",
    "OperadModel",
    "OperadMorphism",
    "Multiplication",
    "OperadError",
    "compose_full",
    "partial_compose",
    "insert_at",
    "check_operad_axioms",
    "check_morphism",
]


class OperadError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OperadElement:
    """An element of P(arity): a sparse combination of model basis keys."""

    arity: int
    terms: Dict[Any, Fraction]
    model: str = ""

    def __add__(self, other: "OperadElement") -> "OperadElement":
        _same_space(self, other)
        return OperadElement(self.arity, vec_axpy(dict(self.terms), other.terms), self.model)

    def __sub__(self, other: "OperadElement") -> "OperadElement":
        _same_space(self, other)
        return OperadElement(self.arity, vec_sub(self.terms, other.terms), self.model)

    def __neg__(self) -> "OperadElement":
        return OperadElement(self.arity, vec_scale(self.terms, -1), self.model)

    def scale(self, c) -> "OperadElement":
        return OperadElement(self.arity, vec_scale(self.terms, Fraction(c)), self.model)

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, OperadElement):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __repr__(self):
        return f"OperadElement(arity={self.arity}, terms={len(self.terms)}, model={self.model!r})"

    def to_json(self) -> dict:
        from .reporting import jsonable

        return {
            "arity": self.arity,
            "terms": [[jsonable(k), jsonable(c)] for k, c in sorted(self.terms.items(), key=repr)],
        }


def _same_space(a: OperadElement, b: OperadElement):
    if a.arity != b.arity:
        raise OperadError(f"arity mismatch: {a.arity} vs {b.arity}")
    if a.model and b.model and a.model != b.model:
        raise OperadError(f"model mismatch: {a.model} vs {b.model}")


@dataclass
class OperadModel:
    name: str
    identity: OperadElement
    sample: Callable[[Any, int, int], OperadElement]
    gamma: Optional[Callable[[OperadElement, Sequence[OperadElement]], OperadElement]] = None
    partial: Optional[Callable[[OperadElement, int, OperadElement], OperadElement]] = None
    canon: Callable[[OperadElement], Any] = field(default=lambda x: x.terms)
    max_arity: int = 3
    info: Dict[str, Any] = field(default_factory=dict)

    def zero(self, arity: int) -> OperadElement:
        return OperadElement(arity, {}, self.name)

    def equal(self, x: OperadElement, y: OperadElement) -> bool:
        return x.arity == y.arity and self.canon(x) == self.canon(y)

    def is_zero(self, x: OperadElement) -> bool:
        return not self.canon(x)


def _check_members(model: OperadModel, *elems: OperadElement):
    for e in elems:
        if e.model and e.model != model.name:
            raise OperadError(f"element of {e.model!r} used in model {model.name!r}")


def compose_full(model: OperadModel, x: OperadElement, ys: Sequence[OperadElement]) -> OperadElement:
    """gamma(x; y_1, ..., y_n)."""
    if len(ys) != x.arity:
        raise OperadError(f"gamma needs {x.arity} inputs, got {len(ys)}")
    _check_members(model, x, *ys)
    if model.gamma is not None:
        return model.gamma(x, list(ys))
    # right to left, so earlier slot numbers stay put
    out = x
    for pos in range(x.arity, 0, -1):
        out = model.partial(out, pos, ys[pos - 1])
    return out


def partial_compose(model: OperadModel, x: OperadElement, i: int, y: OperadElement) -> OperadElement:
    """x o_i y."""
    if not 1 <= i <= x.arity:
        raise OperadError(f"slot {i} out of range for arity {x.arity}")
    _check_members(model, x, y)
    if model.partial is not None:
        return model.partial(x, i, y)
    ys = [model.identity] * x.arity
    ys[i - 1] = y
    return model.gamma(x, ys)


def insert_at(model: OperadModel, x: OperadElement, positions: Sequence[int], ys: Sequence[OperadElement]) -> OperadElement:
    """gamma(x; id, .., y_1, .., y_k, .., id) with y_p in slot positions[p]."""
    if model.gamma is not None:
        fill = [model.identity] * x.arity
        for p, y in zip(positions, ys):
            fill[p - 1] = y
        return model.gamma(x, fill)
    out = x
    for p, y in sorted(zip(positions, ys), key=lambda t: -t[0]):
        out = model.partial(out, p, y)
    return out


def _iterated_partials(model: OperadModel, x: OperadElement, ys: Sequence[OperadElement]) -> OperadElement:
    """gamma rebuilt as (..((x o_1 y_1) o_{k_1+1} y_2)..)."""
    out = x
    pos = 1
    for y in ys:
        out = partial_compose(model, out, pos, y)
        pos += y.arity
    return out


def check_operad_axioms(
    model: OperadModel,
    trials: int = 100,
    seed: int = 0,
    size: int = 3,
    max_arity: Optional[int] = None,
) -> Report:
    """Sequential, parallel and unit axioms plus gamma-versus-partials consistency."""
    top = model.max_arity if max_arity is None else max_arity
    report = Report(f"operad[{model.name}]", config={"seed": seed, "trials": trials, "size": size})
    ident = model.identity
    for t in range(trials):
        rng = sample_rng(seed, t, model.name)
        report.trials += 1
        if top < 1:
            # nothing of positive arity to compose into
            x = model.sample(rng, 0, size)
            report.record("unit_left", model.equal(partial_compose(model, ident, 1, x), x), t)
            continue
        n = rng.randint(1, top)
        m = rng.randint(0, top)
        l = rng.randint(0, top)
        x, y, z = model.sample(rng, n, size), model.sample(rng, m, size), model.sample(rng, l, size)
        inputs = {"x": x, "y": y, "z": z}

        i = rng.randint(1, n)
        if m >= 1:
            j = rng.randint(1, m)
            lhs = partial_compose(model, partial_compose(model, x, i, y), i - 1 + j, z)
            rhs = partial_compose(model, x, i, partial_compose(model, y, j, z))
            report.record("sequential", model.equal(lhs, rhs), t, dict(inputs, i=i, j=j), lhs, rhs)
        if n >= 2:
            a, k = sorted(rng.sample(range(1, n + 1), 2))
            lhs = partial_compose(model, partial_compose(model, x, a, y), k - 1 + m, z)
            rhs = partial_compose(model, partial_compose(model, x, k, z), a, y)
            report.record("parallel", model.equal(lhs, rhs), t, dict(inputs, i=a, k=k), lhs, rhs)
        ok_left = model.equal(partial_compose(model, ident, 1, x), x)
        ok_right = model.equal(partial_compose(model, x, i, ident), x)
        report.record("unit", ok_left and ok_right, t, {"x": x, "i": i})

        ys = [model.sample(rng, rng.randint(0, 2), size) for _ in range(n)]
        lhs = compose_full(model, x, ys)
        rhs = _iterated_partials(model, x, ys)
        report.record("gamma_from_partials", model.equal(lhs, rhs), t, {"x": x, "ys": ys}, lhs, rhs)
    return report


@dataclass
class OperadMorphism:
    source: OperadModel
    target: OperadModel
    apply: Callable[[OperadElement], OperadElement]
    check_unit: bool = True

    def __post_init__(self):
        if self.check_unit:
            img = self.apply(self.source.identity)
            if not self.target.equal(img, self.target.identity):
                raise OperadError("morphism does not send identity to identity")

    def __call__(self, x: OperadElement) -> OperadElement:
        return self.apply(x)


def check_morphism(f: OperadMorphism, trials: int = 20, seed: int = 0, size: int = 2, max_arity: Optional[int] = None) -> Report:
    src = f.source
    top = src.max_arity if max_arity is None else max_arity
    report = Report(f"morphism[{src.name}->{f.target.name}]", config={"seed": seed, "trials": trials})
    for t in range(trials):
        rng = sample_rng(seed, t, "morphism")
        report.trials += 1
        n = rng.randint(1, max(top, 1))
        m = rng.randint(0, top)
        x, y = src.sample(rng, n, size), src.sample(rng, m, size)
        i = rng.randint(1, n)
        lhs = f(partial_compose(src, x, i, y))
        rhs = partial_compose(f.target, f(x), i, f(y))
        report.record("partial", f.target.equal(lhs, rhs), t, {"x": x, "y": y, "i": i}, lhs, rhs)
    return report


@dataclass
class Multiplication:
    model: OperadModel
    element: OperadElement
    check: bool = True

    def __post_init__(self):
        if self.element.arity != 2:
            raise OperadError("a multiplication has arity 2")
        if self.check:
            ident = self.model.identity
            lhs = compose_full(self.model, self.element, [self.element, ident])
            rhs = compose_full(self.model, self.element, [ident, self.element])
            if not self.model.equal(lhs, rhs):
                raise OperadError("gamma(m; m, id) != gamma(m; id, m)")
