"""Valuation-theoretic Littlewood-Richardson tools.

Matrices over the field of generalized power series in ``t`` with rational
exponents, their invariant partitions, and the real-valued
Littlewood-Richardson fillings carried by pairs of such matrices.
"""

from .valfield import INFINITY, FieldElement, format_rational, monomial, parse_field_element, parse_rational
from .valmat import (
    IndexSet,
    RPartition,
    ValMatrix,
    diagonal,
    identity,
    interlace_bounds_check,
    interlace_check,
    invariant_partition,
    mat_mul,
    smith_reduce,
)
from .combin import LRFilling, count_integer_fillings, shift_filling, validate_filling
from .generic import (
    FormKind,
    GenericForm,
    GenericityError,
    genericity_check,
    to_mu_generic,
    to_mu_nuhat_generic,
)
from .extract import (
    invariant_sequence_left,
    invariant_sequence_right,
    left_filling,
    matrices_from_filling,
    right_filling,
    right_filling_determinantal,
)
from .dynamics import (
    bijection_left_to_right,
    bijection_right_to_left,
    scalar_shift_pair,
    stability_check_below,
    stability_check_same,
    sweep,
)
from .render import DiagramSpec, render_ascii, render_svg

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
