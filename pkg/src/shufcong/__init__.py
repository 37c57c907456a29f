"""Shuffle-compatibility of monoid congruences over semirings."""

from .compat import (
    boolean_classify,
    check_compatibility,
    classify_quotient,
    primitive_partition,
)
from .congruence import Presentation, QuotientContext, find_weight, parse_presentation
from .freealg import Alphabet, Poly, TensorPoly, coproduct, shuffle
from .semiring import QQ, SemiringSpec, parse_semiring

__version__ = "0.1.0"
