"""Matrix multiplication schemes over GF(p): verification, normal forms, equivalence."""

from .canon import (
    Limits,
    NormalFormResult,
    brute_force_normal_form,
    equivalent,
    is_normal_form,
    minimize_row,
    normal_form,
    row_stabilizer,
)
from .field import Field, FieldElement, FieldError, field_make
from .kernels import HAVE_COMPILED, get_kernel
from .matrix import (
    CapExceeded,
    Mat,
    SingularMatrix,
    enumerate_gl,
    mat_cmp,
    mat_inverse,
    mat_rank,
    minimal_biequivalent,
    minimize_columns,
    solve_sandwich,
)
from .scheme import (
    ColumnSymmetry,
    ParseError,
    Row,
    Scheme,
    canonical_digest,
    dumps_json,
    loads_json,
    maximal_pattern,
    parse,
    rank_pattern,
    scheme_cmp,
    serialize,
    verify,
)
from .symmetry import (
    SandwichTriple,
    SymmetryElement,
    apply,
    compose,
    format_element,
    identity_element,
    invert,
    parse_element,
    random_element,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ColumnSymmetry",
    "Field",
    "FieldElement",
    "FieldError",
    "HAVE_COMPILED",
    "Limits",
    "Mat",
    "NormalFormResult",
    "ParseError",
    "Row",
    "SandwichTriple",
    "Scheme",
    "SingularMatrix",
    "SymmetryElement",
    "apply",
    "brute_force_normal_form",
    "canonical_digest",
    "compose",
    "dumps_json",
    "enumerate_gl",
    "equivalent",
    "field_make",
    "format_element",
    "get_kernel",
    "identity_element",
    "invert",
    "is_normal_form",
    "loads_json",
    "mat_cmp",
    "mat_inverse",
    "mat_rank",
    "maximal_pattern",
    "minimal_biequivalent",
    "minimize_columns",
    "minimize_row",
    "normal_form",
    "parse",
    "parse_element",
    "random_element",
    "rank_pattern",
    "row_stabilizer",
    "scheme_cmp",
    "serialize",
    "solve_sandwich",
    "verify",
]
