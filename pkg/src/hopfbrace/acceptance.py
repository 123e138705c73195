"""The eleven acceptance criteria as runnable suites.

Each entry builds one Report; ``run_criterion(k)`` returns it and the wall-clock
seconds.  The mutation criterion passes when every corruption is caught.
"""

from __future__ import annotations

import time
from typing import Callable, Dict, List, Tuple

from .reporting import Report
from . import suites as S

OPERAD_MODELS = ("ks3", "endA", "weyl1", "aff1", "sl2")


def _merged(name: str, parts) -> Report:
    rep = Report(name)
    for r in parts:
        rep.merge(r)
    return rep


def c1_operad(seed: int = 0) -> Report:
    return _merged("operad_axioms", (S.suite_operad(m, trials=100, seed=seed, size=3, order=3) for m in OPERAD_MODELS))


def c2_binf(seed: int = 0) -> Report:
    return _merged("brace_binf", (S.suite_binf(m, trials=20, seed=seed, degree=3, delta_samples=200, order=3)
                                  for m in OPERAD_MODELS))


def c3_oracle(seed: int = 0) -> Report:
    return S.suite_oracle(trials=100, seed=seed, degree=3)


def c4_explicit(seed: int = 0) -> Report:
    return _merged("explicit", (S.suite_explicit(m, trials=100, seed=seed) for m in OPERAD_MODELS))


def c5_twistor(seed: int = 0) -> Report:
    return _merged("twistor", (S.suite_twistor("weyl2", order=4),
                               S.suite_two_types("weyl2", order=2, trials=50, seed=seed, degree=2)))


def c6_star(seed: int = 0) -> Report:
    return S.suite_star(("aff1", "heis"), order=4, degree=4, eval_degree=3)


def c7_lemmas(seed: int = 0) -> Report:
    return S.suite_lemmas("aff1", order=3, trials=30, seed=seed)


def c8_embedding(seed: int = 0) -> Report:
    return _merged("embedding", (S.suite_embedding(p, order=2, trials=20, seed=seed, strict_trials=5) for p in ("aff1", "sl2")))


def c9_equiv(seed: int = 0) -> Report:
    return S.suite_equiv("aff1", order=2, trials=30, seed=seed, dte_trials=20)


def c10_twisted(seed: int = 0) -> Report:
    return S.suite_twisted("aff1", order=2, trials=20, seed=seed)


def c11_mutations(seed: int = 0) -> Report:
    rep = Report("mutations", config={"seed": seed})
    for kind in S.MUTATIONS:
        inner = S.suite_mutation(kind, seed=seed)
        rep.trials += 1
        first = inner.failures[0] if inner.failures else None
        rep.record(f"{kind}.detected", not inner.ok, kind, first)
        rep.notes[kind] = {"failed_checks": sorted(k for k, (p, f) in inner.checks.items() if f),
                           "witness": first}
    return rep


CRITERIA: Dict[int, Tuple[str, Callable[[int], Report]]] = {
    1: ("operad axioms", c1_operad),
    2: ("brace B-infinity axioms", c2_binf),
    3: ("Hochschild oracle equivalence", c3_oracle),
    4: ("explicit vs generic formulas", c4_explicit),
    5: ("twistor and two types", c5_twistor),
    6: ("star products", c6_star),
    7: ("star, phi and Theta identities", c7_lemmas),
    8: ("embedding", c8_embedding),
    9: ("ADTE / twistor / DTE equivalence", c9_equiv),
    10: ("twisted diagram", c10_twisted),
    11: ("mutation sensitivity", c11_mutations),
}


def run_criterion(k: int, seed: int = 0) -> Tuple[Report, float]:
    _, fn = CRITERIA[k]
    start = time.perf_counter()
    rep = fn(seed)
    return rep, time.perf_counter() - start


def run_all(seed: int = 0, which: List[int] | None = None) -> List[Tuple[int, str, Report, float]]:
    out = []
    for k in which or sorted(CRITERIA):
        rep, secs = run_criterion(k, seed)
        out.append((k, CRITERIA[k][0], rep, secs))
    return out


def status_line(k: int, title: str, rep: Report, secs: float) -> str:
    return f"criterion {k:2d} {'PASS' if rep.ok else 'FAIL'}  {title}: {rep.passed} passed, {rep.failed} failed [{secs:.1f}s]"
