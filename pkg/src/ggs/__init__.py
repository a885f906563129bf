"""Structural invariants of GGS-groups on p-regular rooted trees.

Closed-form index formulas for derived series and level stabilizers, circulant
rank machinery over F_p, a word-based section calculus for the generators
``a`` and ``b``, and a Schreier-Sims engine that brute-forces the same indices
inside finite congruence quotients.
"""

from ggs.errors import ConstantTupleError, TheoremViolation, UsageError
from ggs.tuples import DefiningTuple, classify, are_isomorphic
from ggs.formulas import derived_index_log, stabilizer_index_log

__version__ = "0.1.0"

__all__ = [
    "ConstantTupleError",
    "TheoremViolation",
    "UsageError",
    "DefiningTuple",
    "classify",
    "are_isomorphic",
    "derived_index_log",
    "stabilizer_index_log",
]
