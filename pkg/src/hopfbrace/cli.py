"""Command line entry point: ``hopfbrace verify|compute|report``.

Exit codes: 0 when every check passes, 1 on any failure, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import List, Optional

from . import suites as S
from .io import chain_from_json, chain_to_json, load_pair, poly_from_json, poly_to_json, read_json, tensor_from_json, tensor_to_json
from .liepair import unit_chain
from .reporting import Report

VERIFY = ("operad", "binf", "hopf", "twistor", "two-types", "wgl", "lemmas", "embedding", "adte", "equiv",
          "twisted-diagram", "oracle", "explicit", "star", "mutation", "acceptance")
COMPUTE = ("c", "theta-gutt", "theta-pbw", "star", "random-chain")


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int)
    common.add_argument("--degree", type=int)
    common.add_argument("--order", type=int)
    common.add_argument("--vmin", type=int, default=0)
    common.add_argument("--pair", help="built-in pair name (%s) or a TOML file" % ", ".join(sorted(S.PAIRS)))
    common.add_argument("--model", help="Hopf model (%s) or pair name" % ", ".join(S.HOPF_MODELS))
    common.add_argument("--input", help="JSON input (chain, tensor or polynomials)")
    common.add_argument("--mutation", choices=S.MUTATIONS, help="corruption for `verify mutation`")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("-o", "--output", help="output file (report: directory)")

    p = argparse.ArgumentParser(prog="hopfbrace", description="Brace B-infinity structures of Hopf algebroids and Lie pairs.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=VERIFY)
    c = sub.add_parser("compute", parents=[common], help="compute an object and print it as JSON")
    c.add_argument("what", choices=COMPUTE)
    r = sub.add_parser("report", parents=[common], help="run the acceptance criteria and write JSON plus figures")
    r.add_argument("--criteria", type=int, nargs="*", help="subset of criteria to run")
    return p


def _pair(args):
    if args.pair is None:
        return None
    if args.pair in S.PAIRS:
        return S.get_pair(args.pair)
    path = Path(args.pair)
    if not path.exists():
        raise UsageError(f"--pair: {args.pair!r} is neither a built-in pair nor a file")
    return load_pair(path)


def _kw(args, **names) -> dict:
    """Pick the flags that were given, renamed to suite keyword arguments."""
    out = {}
    for flag, kw in names.items():
        val = getattr(args, flag)
        if val is not None:
            out[kw] = val
    return out


def _require_input(args):
    if not args.input:
        raise UsageError("this command needs --input")
    return read_json(args.input)


def _target(args, default: str):
    """(name, pair) for suites that accept either a Hopf model or a Lie pair."""
    P = _pair(args)
    if P is not None:
        return P.name, P
    name = args.model or default
    if name not in S.PAIRS and name not in S.HOPF_MODELS and not name.startswith("weyl"):
        raise UsageError(f"unknown model {name!r}")
    return name, None


def _verify(args) -> Report:
    kind = args.suite
    base = _kw(args, seed="seed", trials="trials")
    if kind == "operad":
        name, P = _target(args, "ks3")
        return S.suite_operad(name, pair=P, **base, **_kw(args, order="order"))
    if kind == "binf":
        name, P = _target(args, "ks3")
        return S.suite_binf(name, pair=P, **base, **_kw(args, degree="degree", order="order"))
    if kind == "hopf":
        name, P = _target(args, "ks3")
        return S.suite_hopf(name, pair=P, **base, **_kw(args, order="order"))
    if kind == "explicit":
        name, P = _target(args, "ks3")
        return S.suite_explicit(name, pair=P, **base, **_kw(args, degree="degree", order="order"))
    if kind == "twistor":
        F = tensor_from_json(read_json(args.input)) if args.input else None
        return S.suite_twistor(args.model or "weyl2", F=F, vmin=args.vmin, **_kw(args, order="order"))
    if kind == "two-types":
        F = tensor_from_json(read_json(args.input)) if args.input else None
        return S.suite_two_types(args.model or "weyl2", F=F, vmin=args.vmin, **base, **_kw(args, order="order", degree="degree"))
    if kind == "oracle":
        return S.suite_oracle(**base, **_kw(args, degree="degree"))
    if kind == "star":
        names = (args.pair,) if args.pair else ("aff1", "heis")
        return S.suite_star(names, **_kw(args, order="order", degree="degree"))
    if kind == "mutation":
        if not args.mutation:
            raise UsageError("verify mutation needs --mutation")
        return S.suite_mutation(args.mutation, seed=args.seed)
    if kind == "acceptance":
        from .acceptance import run_all

        rep = Report("acceptance", config={"seed": args.seed})
        for k, title, r, _ in run_all(args.seed):
            rep.merge(r)
        return rep
    P = _pair(args) or S.get_pair(args.model or "aff1")
    if kind == "wgl":
        return S.suite_wgl(P.name, pair=P, **base, **_kw(args, degree="degree", order="order"))
    if kind == "lemmas":
        return S.suite_lemmas(P.name, pair=P, **base, **_kw(args, order="order"))
    if kind == "embedding":
        return S.suite_embedding(P.name, pair=P, **base, **_kw(args, order="order"))
    if kind == "equiv":
        return S.suite_equiv(P.name, pair=P, **base, **_kw(args, order="order"))
    K = chain_from_json(_require_input(args))[0] if args.input else None
    if kind == "adte":
        return S.suite_adte(P.name, K=K, pair=P, **_kw(args, order="order"))
    if kind == "twisted-diagram":
        return S.suite_twisted(P.name, K=K, pair=P, **base, **_kw(args, order="order"))
    raise UsageError(f"unknown suite {kind}")  # pragma: no cover


def _compute(args):
    from .embed import CMorphism
    from .qgroupoid import QuantumGroupoid
    from .sampling import random_chain

    P = _pair(args) or S.get_pair(args.model or "aff1")
    order = 2 if args.order is None else args.order
    if args.what == "random-chain":
        ch = random_chain(P, args.degree or 0, seed=args.seed)
        out = chain_to_json(ch.terms, order)
        out.update(degree=ch.degree, certified=ch.certified, note=ch.note)
        return out
    Q = QuantumGroupoid(P, order=order, slack=0)
    if args.what == "theta-gutt":
        return tensor_to_json(Q.theta_gutt(), 2)
    if args.what == "theta-pbw":
        return tensor_to_json(Q.theta_pbw(args.degree), 2)
    if args.what == "star":
        data = _require_input(args)
        if not isinstance(data, dict) or "f" not in data or "g" not in data:
            raise UsageError("star input must be {\"f\": [[exps, coeff], ...], \"g\": [...]}")
        return poly_to_json(Q.star_pbw(poly_from_json(data["f"]), poly_from_json(data["g"])), order)
    if args.what == "c":
        if args.input:
            K, n = chain_from_json(read_json(args.input))
        else:
            K, n = unit_chain(2), 2
        return tensor_to_json(CMorphism(Q).c(K, n), n)
    raise UsageError(f"unknown object {args.what}")  # pragma: no cover


def _report(args) -> int:
    from .acceptance import run_all, status_line
    from .figures import checks_figure, first_failure_figure, timing_figure

    out = Path(args.output or "report")
    out.mkdir(parents=True, exist_ok=True)
    rows = run_all(args.seed, args.criteria or None)
    data = {"seed": args.seed, "criteria": {str(k): {"title": t, "pass": r.ok, "report": r.to_json()} for k, t, r, _ in rows}}
    (out / "report.json").write_text(json.dumps(data, indent=2, sort_keys=True))
    checks_figure(rows, out / "checks.png")
    timing_figure(rows, out / "timing.png")
    for k, _, r, _ in rows:
        if k == 9:
            first_failure_figure(r, out / "first_failure_orders.png")
    for row in rows:
        print(status_line(*row))
    print(f"wrote {out}/report.json")
    return 0 if all(r.ok for _, _, r, _ in rows) else 1


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "report":
            return _report(args)
        if args.command == "compute":
            _emit(args, json.dumps(_compute(args)))
            return 0
        start = time.perf_counter()
        rep = _verify(args)
        if args.format == "json":
            _emit(args, rep.dumps())
        else:
            _emit(args, rep.summary())
            print(f"[{time.perf_counter() - start:.2f}s]", file=sys.stderr)
        return 0 if rep.ok else 1
    except (UsageError, ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
