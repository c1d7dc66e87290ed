"""Exact-arithmetic homological algebra for quiver path-algebra quotients.

The toolkit builds algebras from presentations (finite-dimensional or
graded with a degree cap), computes minimal projective resolutions,
Ext/Tor and the transpose functor, certifies generalized Artin-Schelter
regularity, and reproduces the standard construction chain: trivial
extensions, cyclic skew group algebras, idempotent truncations,
quadratic duals, Auslander algebras and Yoneda Ext-algebras with their
Frobenius test.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraHandle,
    GrowthVerdict,
    HilbertData,
    algebra_basis,
    classify_growth,
    hilbert_function,
)
from .errors import (
    CapError,
    ExtractionError,
    InconclusiveError,
    ParseError,
    ToolkitError,
    ValidationError,
)
from .fields import PrimeField, Rationals, field_from_spec
from .groebner import compute_normal_forms, dump_table
from .quiver import (
    Arrow,
    Presentation,
    Quiver,
    format_presentation,
    opposite_presentation,
    parse_presentation,
)

__all__ = [
    "AlgebraHandle",
    "Arrow",
    "CapError",
    "ExtractionError",
    "GrowthVerdict",
    "HilbertData",
    "InconclusiveError",
    "ParseError",
    "Presentation",
    "PrimeField",
    "Quiver",
    "Rationals",
    "ToolkitError",
    "ValidationError",
    "algebra_basis",
    "classify_growth",
    "compute_normal_forms",
    "dump_table",
    "field_from_spec",
    "format_presentation",
    "hilbert_function",
    "opposite_presentation",
    "parse_presentation",
]
