"""File formats: Lie pair TOML, chain JSON, tensor JSON, polynomial JSON.

Chains follow ``{"terms": [{"gfactors": [...], "lfactor": [...], "coeff": HSeries}]}``
where words are lists of generator indices.  Tensors of a Hopf algebroid are stored
generically as ``{"arity": n, "terms": [[v, key, "p/q"], ...]}`` with the model's
canonical key written as nested lists.  Failure witnesses (dicts whose keys are the
``repr`` of a key tuple) are accepted wherever a tensor or chain is read.
"""

from __future__ import annotations

import ast
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Tuple

from .coeff import HSeries, format_rational, parse_rational
from .liepair import LiePair, pair_from_dict

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

Vec = Dict[tuple, Fraction]


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(y) for y in x)
    return x


def _listify(x):
    if isinstance(x, tuple):
        return [_listify(y) for y in x]
    return x


# ---------------------------------------------------------------------------
# Lie pairs


def load_pair(path) -> LiePair:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    data.setdefault("name", Path(path).stem)
    return pair_from_dict(data)


def dump_pair(P: LiePair) -> str:
    d = P.to_dict()
    lines = [f'name = "{d["name"]}"', f"dim_g = {d['dim_g']}", f"dim_l = {d['dim_l']}"]
    if d.get("names"):
        lines.append("names = [" + ", ".join(f'"{n}"' for n in d["names"]) + "]")
    rows = ", ".join(f'[{i}, {j}, {k}, "{c}"]' for i, j, k, c in d["brackets"])
    lines.append(f"brackets = [{rows}]")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# chains in U(g)^n (x) U(l)[[hbar]]


def chain_to_json(A: Vec, order: int = 8) -> dict:
    grouped: Dict[tuple, Dict[int, Fraction]] = {}
    for (v, key), c in A.items():
        grouped.setdefault(key, {})[v] = c
    terms = []
    for key in sorted(grouped):
        *gs, wl = key
        series = HSeries(grouped[key], min(0, min(grouped[key])), max(order, max(grouped[key])))
        terms.append({"gfactors": [list(w) for w in gs], "lfactor": list(wl), "coeff": series.to_json()})
    return {"degree": len(next(iter(grouped))) - 1 if grouped else None, "terms": terms}


def chain_from_json(data) -> Tuple[Vec, int]:
    """Returns the chain and its degree (number of U(g) legs)."""
    if _is_witness(data):
        vec = _witness_vec(data)
        deg = len(next(iter(vec))[1]) - 1 if vec else 0
        return vec, deg
    out: Vec = {}
    degree = data.get("degree")
    for t in data.get("terms", []):
        gs = tuple(tuple(int(i) for i in w) for w in t["gfactors"])
        if degree is None:
            degree = len(gs)
        elif len(gs) != degree:
            raise ValueError("chain terms have different numbers of U(g) factors")
        key = gs + (tuple(int(i) for i in t.get("lfactor", [])),)
        for v, c in HSeries.from_json(t.get("coeff", "1")).terms.items():
            out[(v, key)] = out.get((v, key), Fraction(0)) + c
    return {k: c for k, c in out.items() if c}, int(degree or 0)


# ---------------------------------------------------------------------------
# generic tensors and witnesses


def tensor_to_json(x: Vec, arity: int | None = None) -> dict:
    terms = [[v, _listify(key), format_rational(c)] for (v, key), c in sorted(x.items(), key=lambda kv: repr(kv[0]))]
    return {"arity": arity, "terms": terms}


def tensor_from_json(data) -> Vec:
    if _is_witness(data):
        return _witness_vec(data)
    out: Vec = {}
    for v, key, c in data.get("terms", []):
        k = (int(v), _tuplify(key))
        out[k] = out.get(k, Fraction(0)) + parse_rational(c)
    return {k: c for k, c in out.items() if c}


def _is_witness(data) -> bool:
    return isinstance(data, dict) and "terms" not in data and all(isinstance(k, str) and k.startswith("(") for k in data)


def _witness_vec(data: dict) -> Vec:
    return {ast.literal_eval(k): parse_rational(c) for k, c in data.items()}


# ---------------------------------------------------------------------------
# polynomials on l*


def poly_from_json(data, order: int = 8) -> Vec:
    """``[[exponents, coeff], ...]`` with coeff a rational string or an HSeries dict."""
    out: Vec = {}
    for a, c in data:
        for v, q in HSeries.from_json(c).terms.items():
            key = (v, (tuple(int(e) for e in a), ()))
            out[key] = out.get(key, Fraction(0)) + q
    return {k: c for k, c in out.items() if c}


def poly_to_json(f: Vec, order: int = 8) -> list:
    grouped: Dict[tuple, Dict[int, Fraction]] = {}
    for (v, (a, _)), c in f.items():
        grouped.setdefault(a, {})[v] = c
    return [[list(a), HSeries(t, min(0, min(t)), max(order, max(t))).to_json()] for a, t in sorted(grouped.items())]


def read_json(path) -> Any:
    with open(path) as fh:
        return json.load(fh)
