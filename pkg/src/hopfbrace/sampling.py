"""Seeded generation of invariant chains."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from .liepair import LiePair, UEnv, check_invariance, invariant_basis, random_invariant
from .reporting import sample_rng


@dataclass
class InvariantChain:
    degree: int
    terms: Dict[tuple, Fraction]
    certified: bool
    note: Optional[str] = None

    @property
    def empty(self) -> bool:
        return not self.terms


def random_chain(pair: LiePair, degree: int, size: int = 2, seed: int = 0, max_len: int = 2,
                 order: int = 2, uenv: Optional[UEnv] = None) -> InvariantChain:
    """A random l-invariant chain of the given degree, reproducible from ``seed``.

    The chain is a small integer combination of a basis of the invariant subspace on
    words of length at most ``max_len``.  An empty invariant space is reported in
    ``note`` rather than raised.
    """
    U = uenv or UEnv(pair)
    if not invariant_basis(U, degree, max_len):
        return InvariantChain(degree, {}, True, f"no invariant chains of degree {degree} with words of length <= {max_len}")
    rng = sample_rng(seed, 0, f"chain-{pair.name}-{degree}")
    A = random_invariant(U, degree, rng, size=size, order=order, max_len=max_len)
    ok, _, _ = check_invariance(U, A, degree)
    return InvariantChain(degree, A, ok)
