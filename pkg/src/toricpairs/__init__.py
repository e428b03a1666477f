"""Exact toric geometry and complexity of log pairs."""

from .complexity import (
    AbstractPairData,
    ComplexityReport,
    Decomposition,
    absolute_complexity,
    boundary_bracket,
    decomposition_complexity,
    local_complexity,
    min_complexity,
    toric_theorem_check,
)
from .coxrat import (
    RationalityCertificate,
    Verdict,
    rationality_certificate,
    regrade_double_cover,
    section7_report,
)
from .exactlin import IntMatrix, kernel_basis, rank, smith_normal_form
from .fan import Fan, is_complete, is_simplicial, is_smooth, make_fan, star_quotient
from .grading import GradedGroup, GradedPresentation
from .kernels import BACKEND
from .toric import (
    ClassGroup,
    InvariantDivisor,
    canonical_divisor,
    class_group,
    cox_presentation,
    divisor_class,
    is_ample,
    is_nef,
    lc_check_invariant,
    lift_from_invariant_subvariety,
    log_discrepancy,
    support_function,
)

__version__ = "0.1.0"
