"""Exact computations with height-r one-parameter subgroups of GL_n over F_p."""

from .errors import CapacityError, ConsistencyError, DomainError, FrobexpError, UsageError
from .fields import Field, FieldElement, binom_mod_p, prime_field
from .matrices import CommutingTuple, SquareMatrix, random_commuting_tuple
from .oneparam import OneParamSubgroup, decompose, exp_p, lift, log_p, saturate
from .truncpoly import PolyMatrix, TruncPoly

__all__ = [
    "CapacityError",
    "CommutingTuple",
    "ConsistencyError",
    "DomainError",
    "Field",
    "FieldElement",
    "FrobexpError",
    "OneParamSubgroup",
    "PolyMatrix",
    "SquareMatrix",
    "TruncPoly",
    "UsageError",
    "binom_mod_p",
    "decompose",
    "exp_p",
    "lift",
    "log_p",
    "prime_field",
    "random_commuting_tuple",
    "saturate",
]

__version__ = "0.1.0"
