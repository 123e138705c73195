"""Check reports shared by every verification suite."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List

from .coeff import format_rational

MAX_WITNESSES = 25


def jsonable(obj):
    """Turn nested tuples, fractions and elements into JSON-friendly data."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def sample_rng(seed: int, trial: int, salt: str = "") -> random.Random:
    """Per-sample generator so that every witness can be replayed alone."""
    return random.Random(f"{seed}:{salt}:{trial}")


@dataclass
class Report:
    suite: str
    trials: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    checks: Dict[str, List[int]] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)
    notes: Dict[str, Any] = field(default_factory=dict)

    def record(self, check: str, ok: bool, seed=None, inputs=None, lhs=None, rhs=None) -> bool:
        tally = self.checks.setdefault(check, [0, 0])
        tally[0 if ok else 1] += 1
        if not ok and len(self.failures) < MAX_WITNESSES:
            self.failures.append(
                {
                    "check": check,
                    "seed": seed,
                    "inputs": jsonable(inputs),
                    "lhs": jsonable(lhs),
                    "rhs": jsonable(rhs),
                }
            )
        return ok

    @property
    def failed(self) -> int:
        return sum(t[1] for t in self.checks.values())

    @property
    def passed(self) -> int:
        return sum(t[0] for t in self.checks.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def merge(self, other: "Report") -> "Report":
        for name, (p, f) in other.checks.items():
            tally = self.checks.setdefault(f"{other.suite}.{name}", [0, 0])
            tally[0] += p
            tally[1] += f
        room = MAX_WITNESSES - len(self.failures)
        for w in other.failures[: max(room, 0)]:
            self.failures.append(dict(w, check=f"{other.suite}.{w['check']}"))
        self.trials += other.trials
        return self

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "failures": self.failures,
            "checks": {k: {"passed": v[0], "failed": v[1]} for k, v in sorted(self.checks.items())},
            "config": jsonable(self.config),
            "notes": jsonable(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{status} {self.suite}: {self.passed} passed, {self.failed} failed ({self.trials} trials)"]
        for name, (p, f) in sorted(self.checks.items()):
            lines.append(f"  {'ok ' if f == 0 else 'BAD'} {name}: {p}/{p + f}")
        for w in self.failures[:5]:
            lines.append(f"  witness {w['check']} seed={w['seed']}")
        return "\n".join(lines)
