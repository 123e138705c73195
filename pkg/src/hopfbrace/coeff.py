"""Exact scalars: rationals and truncated Laurent series in the formal parameter hbar.

Two layers live here.  :class:`HSeries` is a self-contained truncated Laurent
series with an explicit window ``[vmin, order]``.  The sparse-vector helpers
below are what the algebra modules use internally: a vector is a plain
``dict`` whose keys are ``(v, core)`` pairs, where ``v`` is the hbar exponent
and ``core`` a model-specific basis label, and whose values are
:class:`fractions.Fraction`.  Folding the exponent into the key lets a model
truncate products with a single integer comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Mapping, Tuple

Rational = Fraction

__all__ = [
    "Rational",
    "HSeries",
    "WindowError",
    "hs_add",
    "hs_mul",
    "hs_invert",
    "parse_rational",
    "format_rational",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "vec_axpy",
    "vec_clean",
    "vec_shift",
    "vec_truncate",
    "vec_series",
]


class WindowError(ArithmeticError):
    """Raised when a result needs an hbar exponent outside the allowed window."""


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class HSeries:
    """A truncated Laurent series ``sum_v c_v hbar^v`` known modulo hbar^(order+1).

    ``vmin`` is the lowest exponent the window admits.  A series with
    ``vmin == 0`` is a formal power series.
    """

    terms: Mapping[int, Fraction] = field(default_factory=dict)
    vmin: int = 0
    order: int = 8

    def __post_init__(self):
        if self.vmin > 0 or self.order < 0:
            raise ValueError("window must satisfy vmin <= 0 <= order")
        clean = {}
        for v, c in self.terms.items():
            c = Fraction(c)
            if c == 0 or v > self.order:
                continue
            if v < self.vmin:
                raise WindowError(f"exponent {v} below window floor {self.vmin}")
            clean[int(v)] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def const(cls, c, vmin: int = 0, order: int = 8) -> "HSeries":
        return cls({0: Fraction(c)}, vmin, order)

    @classmethod
    def hbar(cls, power: int = 1, vmin: int = 0, order: int = 8) -> "HSeries":
        return cls({power: Fraction(1)}, min(vmin, power), order)

    @property
    def valuation(self):
        return min(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, v: int) -> Fraction:
        return self.terms.get(v, Fraction(0))

    def _coerce(self, other) -> "HSeries":
        if isinstance(other, HSeries):
            return other
        return HSeries.const(other, self.vmin, self.order)

    def __add__(self, other):
        return hs_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return HSeries({v: -c for v, c in self.terms.items()}, self.vmin, self.order)

    def __sub__(self, other):
        return hs_add(self, -self._coerce(other))

    def __rsub__(self, other):
        return hs_add(self._coerce(other), -self)

    def __mul__(self, other):
        return hs_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        n = min(self.order, other.order)
        a = {v: c for v, c in self.terms.items() if v <= n}
        b = {v: c for v, c in other.terms.items() if v <= n}
        return a == b

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for v, c in self.terms.items():
            if v == 0:
                parts.append(str(c))
            elif v == 1:
                parts.append(f"{c}*h")
            else:
                parts.append(f"{c}*h^{v}")
        return " + ".join(parts) + f" + O(h^{self.order + 1})"

    def to_json(self) -> dict:
        return {
            "terms": [[v, format_rational(c)] for v, c in self.terms.items()],
            "vmin": self.vmin,
            "order": self.order,
        }

    @classmethod
    def from_json(cls, data) -> "HSeries":
        if isinstance(data, (int, str)):
            return cls.const(parse_rational(data))
        terms = {int(v): parse_rational(c) for v, c in data.get("terms", [])}
        return cls(terms, int(data.get("vmin", 0)), int(data.get("order", 8)))


def _joint_window(a: HSeries, b: HSeries) -> Tuple[int, int]:
    return min(a.vmin, b.vmin), min(a.order, b.order)


def hs_add(a: HSeries, b: HSeries) -> HSeries:
    vmin, order = _joint_window(a, b)
    out = dict(a.terms)
    for v, c in b.terms.items():
        out[v] = out.get(v, 0) + c
    return HSeries({v: c for v, c in out.items() if v <= order}, vmin, order)


def hs_mul(a: HSeries, b: HSeries) -> HSeries:
    vmin, order = _joint_window(a, b)
    out: Dict[int, Fraction] = {}
    for va, ca in a.terms.items():
        for vb, cb in b.terms.items():
            v = va + vb
            if v > order:
                continue
            out[v] = out.get(v, 0) + ca * cb
    for v, c in out.items():
        if c and v < vmin:
            raise WindowError(f"product needs hbar^{v}, window floor is {vmin}")
    return HSeries(out, vmin, order)


def hs_invert(a: HSeries) -> HSeries:
    """Inverse of a nonzero series, computed term by term inside the same window."""
    if a.is_zero():
        raise ZeroDivisionError("series is zero within its window")
    k = a.valuation
    if -k < a.vmin:
        raise WindowError(f"inverse starts at hbar^{-k}, window floor is {a.vmin}")
    lead = a.terms[k]
    # a = h^k (lead + rest); solve (lead + rest) * b = 1 for b on exponents 0..order+k
    unit = {v - k: c for v, c in a.terms.items()}
    span = a.order + k
    b: Dict[int, Fraction] = {}
    for n in range(0, span + 1):
        acc = Fraction(1) if n == 0 else Fraction(0)
        for j in range(1, n + 1):
            cu = unit.get(j)
            if cu is not None and (n - j) in b:
                acc -= cu * b[n - j]
        b[n] = acc / lead
    return HSeries({v - k: c for v, c in b.items()}, a.vmin, a.order)


# ---------------------------------------------------------------------------
# sparse vectors with keys (v, core)

Vec = Dict[Hashable, Fraction]


def vec_clean(a: Mapping) -> Vec:
    return {k: c for k, c in a.items() if c}


def vec_axpy(acc: Vec, b: Mapping, c=1) -> Vec:
    """In place ``acc += c * b``; zero entries are dropped."""
    if c == 0:
        return acc
    for k, x in b.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def vec_add(a: Mapping, b: Mapping) -> Vec:
    return vec_axpy(dict(a), b)


def vec_sub(a: Mapping, b: Mapping) -> Vec:
    return vec_axpy(dict(a), b, -1)


def vec_scale(a: Mapping, c) -> Vec:
    if c == 0:
        return {}
    return {k: c * x for k, x in a.items()}


def vec_shift(a: Mapping, dv: int) -> Vec:
    """Multiply by hbar^dv."""
    return {(k[0] + dv, k[1]): x for k, x in a.items()}


def vec_truncate(a: Mapping, order) -> Vec:
    if order is None:
        return dict(a)
    return {k: x for k, x in a.items() if k[0] <= order}


def vec_series(a: Mapping, core, vmin: int = 0, order: int = 8) -> HSeries:
    """The hbar-series coefficient of basis element ``core`` in ``a``."""
    terms = {k[0]: x for k, x in a.items() if k[1] == core}
    lo = min([vmin] + list(terms))
    return HSeries(terms, lo, order)


def iter_orders(a: Mapping) -> Iterable[int]:
    return sorted({k[0] for k in a})
