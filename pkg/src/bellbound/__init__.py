"""Classical and certified quantum bounds for correlation inequalities.

The package constructs generalized CHSH coefficient matrices, computes their
exact classical maxima by sign enumeration and their quantum (Tsirelson)
maxima through unit Gram vectors with dual certificates, squares Bell
operators symbolically into commutator/anticommutator terms, builds explicit
observable realizations from Clifford generators, and searches for matrices
with large quantum-to-classical ratios.
"""

__version__ = "0.1.0"

from . import errors
from ._kernels import backend, warm_up, worker_count
from .classical import (
    ClassicalBoundResult,
    SignAssignment,
    classical_bound,
    evaluate_classical,
)
from .matrices import (
    CoefficientMatrix,
    chsh_matrix,
    detect_family,
    load_matrix,
    matrix_to_bytes,
    save_matrix,
    tensor_power,
)
from .operators import (
    OperatorExpression,
    OperatorWord,
    closed_form_bound,
    norm_estimate,
    normalized_violation_estimate,
    numeric_check,
    square_bell_operator,
)
from .quantum import (
    DualCertificate,
    GramSolution,
    QuantumBoundResult,
    check_dual,
    load_certificate,
    quantum_bound,
    save_certificate,
    violation_ratio,
)
from .realize import (
    CliffordBasis,
    ObservableRealization,
    bell_value,
    clifford_generators,
    correlation_matrix,
    maximally_entangled_state,
    realization_to_json,
    realize,
)
from .search import (
    ReferenceConstants,
    SearchRecord,
    ratio_search,
    record_from_json,
    reference_constants,
)

__all__ = [
    "__version__",
    "errors",
    "backend",
    "warm_up",
    "worker_count",
    "CoefficientMatrix",
    "chsh_matrix",
    "tensor_power",
    "load_matrix",
    "save_matrix",
    "matrix_to_bytes",
    "detect_family",
    "SignAssignment",
    "ClassicalBoundResult",
    "classical_bound",
    "evaluate_classical",
    "GramSolution",
    "DualCertificate",
    "QuantumBoundResult",
    "quantum_bound",
    "check_dual",
    "violation_ratio",
    "save_certificate",
    "load_certificate",
    "OperatorWord",
    "OperatorExpression",
    "square_bell_operator",
    "numeric_check",
    "norm_estimate",
    "closed_form_bound",
    "normalized_violation_estimate",
    "CliffordBasis",
    "ObservableRealization",
    "clifford_generators",
    "realize",
    "bell_value",
    "correlation_matrix",
    "maximally_entangled_state",
    "realization_to_json",
    "SearchRecord",
    "ReferenceConstants",
    "ratio_search",
    "reference_constants",
    "record_from_json",
]
