"""Words on curves of surfaces in crossing-ball position, and the
combinatorics built on them."""

from .wordcore import (CyclicWord, PartialWord, ReductionTrace, brute_force_oracle, canonicalize,
                       is_omega_reducible, is_R_omega_reducible, l_reduce, parse_word)

__version__ = "0.1.0"

__all__ = [
    "CyclicWord", "PartialWord", "ReductionTrace", "brute_force_oracle", "canonicalize",
    "is_omega_reducible", "is_R_omega_reducible", "l_reduce", "parse_word", "__version__",
]
