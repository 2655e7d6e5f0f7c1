"""Exact computations in multilinear parts of Leibniz algebra varieties."""

from .errors import (
    InvariantViolation,
    LbzError,
    ParseError,
    ResourceBoundError,
    UnassignedGeneratorError,
    UnknownVarietyError,
)
from .heisenberg import HElement, evaluate, h_mul, leibniz_witness, theorem2_assignment
from .kernels import COMPILED_AVAILABLE, Echelon
from .linalg import RationalMatrix, Subspace, contains, nullspace, rank, rref, solve
from .symfunc import (
    character_table,
    class_size,
    colength,
    decompose,
    irreducible_character,
    module_character,
    partitions,
)
from .term import (
    Leaf,
    LinComb,
    Mul,
    TermComb,
    format_term,
    leibniz_reduce,
    multilinearize,
    parse_lincomb,
    parse_term,
    reduce_lincomb,
)
from .v3basis import (
    ThetaElement,
    enumerate_theta,
    parse_theta,
    reduce_to_theta,
    theta_to_lincomb,
    verify_theorem2,
)
from .variety import (
    VarietySpec,
    builtin_variety,
    check_condition_3,
    is_identity,
    multilinear_dimension,
    solve_condition_3,
    tideal_multilinear,
)

__version__ = "0.1.0"
