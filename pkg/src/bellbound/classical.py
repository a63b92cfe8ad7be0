"""Exact classical (local-hidden-variable) maxima by sign enumeration.

The classical maximum of s^T A t over sign vectors reduces to enumerating s
and solving t in closed form: t_l = sign(sum_k A[k,l] s_k).  The enumeration
walks a Gray code so each step updates the column sums in O(m), fixes the
first sign to +1 by global sign symmetry, and keeps the first maximizer in
Gray order.  The scan runs over whichever side of the matrix is smaller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionMismatchError, DomainError, SizeLimitError
from .matrices import CoefficientMatrix

ENUMERATION_CAP = 28


@dataclass(frozen=True)
class SignAssignment:
    """A pair of +-1 vectors together with the bilinear value they attain."""

    s: np.ndarray
    t: np.ndarray
    value: float

    def __post_init__(self) -> None:
        for name in ("s", "t"):
            arr = np.array(getattr(self, name), dtype=np.int8)
            if arr.ndim != 1 or not np.all(np.abs(arr) == 1):
                raise DomainError(f"sign vector {name!r} must contain only +1 and -1")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class ClassicalBoundResult:
    bound: float
    witness: SignAssignment


def evaluate_classical(
    matrix: CoefficientMatrix, s: np.ndarray, t: np.ndarray
) -> float:
    """Value of the bilinear form s^T A t for explicit sign vectors."""
    sv = np.asarray(s, dtype=np.float64)
    tv = np.asarray(t, dtype=np.float64)
    if sv.shape != (matrix.rows,):
        raise DimensionMismatchError(
            f"sign vector s has length {sv.size}, expected {matrix.rows}"
        )
    if tv.shape != (matrix.cols,):
        raise DimensionMismatchError(
            f"sign vector t has length {tv.size}, expected {matrix.cols}"
        )
    if not np.all(np.abs(sv) == 1.0):
        raise DomainError("sign vector s must contain only +1 and -1")
    if not np.all(np.abs(tv) == 1.0):
        raise DomainError("sign vector t must contain only +1 and -1")
    return float(sv @ matrix.entries @ tv)


def classical_bound(matrix: CoefficientMatrix) -> ClassicalBoundResult:
    """Exact maximum of s^T A t over sign vectors, with a witness.

    Raises SizeLimitError when the matrix has more than 28 rows; the bound is
    transpose-invariant, so wide-but-short matrices can be transposed first.
    """
    n, m = matrix.rows, matrix.cols
    if n > ENUMERATION_CAP:
        hint = (
            f"; the bound is transpose-invariant, enumerate the transpose "
            f"({m} rows) instead"
            if m <= ENUMERATION_CAP
            else ""
        )
        raise SizeLimitError(
            f"{n} rows exceeds the {ENUMERATION_CAP}-row enumeration cap{hint}"
        )

    flip = matrix.cols < matrix.rows
    A = matrix.entries.T if flip else matrix.entries
    _, best_idx = _kernels.gray_scan(A)

    s = _kernels.gray_signs(best_idx, A.shape[0])
    col = s @ A
    t = np.where(col >= 0.0, 1.0, -1.0)
    value = float(col @ t)
    if flip:
        s, t = t, s
    witness = SignAssignment(s=s.astype(np.int8), t=t.astype(np.int8), value=value)
    return ClassicalBoundResult(bound=value, witness=witness)
