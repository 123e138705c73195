"""Brace B-infinity algebras of Hopf algebroids, Lie pairs and quantum groupoids, checked exactly over Q."""

from .coeff import HSeries
from .operad import OperadElement, OperadModel, check_operad_axioms, compose_full, partial_compose
from .brace import BraceAlgebra, StrictMorphism, check_brace_binf_axioms
from .hopfalgd import HochschildOracle, b_infinity_of, end_model, operad_model, weyl_model
from .twist import TwistedAlgebroid, check_twistor, exponential_twistor, trivial_twistor, verify_two_types
from .liepair import LiePair, UEnv, adte_check, gl_operad, w_gl_structures
from .qgroupoid import QuantumGroupoid, lemma_suite
from .embed import CMorphism, adt_twistor_equiv, check_embedding, dte_check
from .reporting import Report
from .sampling import random_chain

__version__ = "0.1.0"

__all__ = [
    "HSeries",
    "OperadElement",
    "OperadModel",
    "check_operad_axioms",
    "compose_full",
    "partial_compose",
    "BraceAlgebra",
    "StrictMorphism",
    "check_brace_binf_axioms",
    "HochschildOracle",
    "b_infinity_of",
    "end_model",
    "operad_model",
    "weyl_model",
    "TwistedAlgebroid",
    "check_twistor",
    "exponential_twistor",
    "trivial_twistor",
    "verify_two_types",
    "LiePair",
    "UEnv",
    "adte_check",
    "gl_operad",
    "w_gl_structures",
    "QuantumGroupoid",
    "lemma_suite",
    "CMorphism",
    "adt_twistor_equiv",
    "check_embedding",
    "dte_check",
    "Report",
    "random_chain",
]
