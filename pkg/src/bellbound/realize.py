"""Explicit observables and states realizing a Gram solution.

Given unit Gram vectors x_k, y_l in dimension r, the observables

    X_k = sum_a x_k[a] * g_a        Y_l = sum_a y_l[a] * g_a

built from anticommuting Hermitian involutions g_a square to the identity,
and on the maximally entangled state the correlation of X_k with the
entrywise complex conjugate of Y_l on the second site equals x_k . y_l:

    <Phi| X (x) conj(Y) |Phi>  =  Tr(X Y) / D  =  x . y

because Tr(g_a g_b) = D * delta_ab.  The conjugate-second-site convention is
the single normative convention used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError, SizeLimitError
from .matrices import CoefficientMatrix
from .quantum import GramSolution

MAX_GENERATORS = 12

_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


@dataclass(frozen=True)
class CliffordBasis:
    """r pairwise anticommuting Hermitian involutions on dimension 2^ceil(r/2)."""

    r: int
    dim: int
    generators: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.generators, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "generators", arr)


@dataclass(frozen=True)
class ObservableRealization:
    """Explicit observables plus the maximally entangled state."""

    x_observables: np.ndarray
    y_observables: np.ndarray
    state: np.ndarray

    def __post_init__(self) -> None:
        for name in ("x_observables", "y_observables", "state"):
            arr = np.array(getattr(self, name), dtype=np.complex128)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.x_observables.shape[1]


def clifford_generators(r: int) -> CliffordBasis:
    """Tensor-ladder construction of r anticommuting involutions.

    Generator 2a is Z^a (x) X (x) I..., generator 2a+1 is Z^a (x) Y (x) I...,
    on q = ceil(r/2) qubit factors.
    """
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool) or r < 1:
        raise SizeLimitError(f"generator count must be a positive integer, got {r}")
    if r > MAX_GENERATORS:
        raise SizeLimitError(
            f"generator count {r} exceeds the cap of {MAX_GENERATORS}"
        )
    qubits = (r + 1) // 2
    dim = 1 << qubits
    gens = np.empty((r, dim, dim), dtype=np.complex128)
    for a in range(r):
        position = a // 2
        middle = _PAULI_X if a % 2 == 0 else _PAULI_Y
        op = np.eye(1, dtype=np.complex128)
        for q in range(qubits):
            if q < position:
                factor = _PAULI_Z
            elif q == position:
                factor = middle
            else:
                factor = np.eye(2, dtype=np.complex128)
            op = np.kron(op, factor)
        gens[a] = op
    return CliffordBasis(r=r, dim=dim, generators=gens)


def maximally_entangled_state(dim: int) -> np.ndarray:
    """Density matrix of (1/sqrt(D)) sum_i |ii> on the bipartite space."""
    vec = np.eye(dim, dtype=np.complex128).reshape(-1) / np.sqrt(dim)
    return np.outer(vec, vec.conj())


def realize(matrix: CoefficientMatrix, gram: GramSolution) -> ObservableRealization:
    """Observables and state whose correlations equal the Gram inner products."""
    r = gram.dimension
    if r > MAX_GENERATORS:
        raise SizeLimitError(
            f"gram dimension {r} exceeds the realizable cap of {MAX_GENERATORS}"
        )
    if gram.x.shape[0] != matrix.rows or gram.y.shape[0] != matrix.cols:
        raise DimensionMismatchError(
            "gram solution does not match the coefficient matrix dimensions"
        )
    for name, vecs in (("x", gram.x), ("y", gram.y)):
        norms = np.linalg.norm(vecs, axis=1)
        if np.abs(norms - 1.0).max() > 1e-8:
            raise DomainError(f"gram {name} vectors are not unit length")

    basis = clifford_generators(r)
    x_obs = np.tensordot(gram.x, basis.generators, axes=(1, 0))
    y_obs = np.tensordot(gram.y, basis.generators, axes=(1, 0))
    state = maximally_entangled_state(basis.dim)
    return ObservableRealization(
        x_observables=x_obs, y_observables=y_obs, state=state
    )


def correlation_matrix(realization: ObservableRealization) -> np.ndarray:
    """All pair correlations Tr(rho * (X_k (x) conj(Y_l)))."""
    n = realization.x_observables.shape[0]
    m = realization.y_observables.shape[0]
    rho = realization.state
    out = np.empty((n, m), dtype=np.float64)
    for k in range(n):
        for l in range(m):
            op = np.kron(
                realization.x_observables[k],
                realization.y_observables[l].conj(),
            )
            out[k, l] = np.einsum("ij,ji->", rho, op).real
    return out


def bell_value(realization: ObservableRealization, matrix: CoefficientMatrix) -> float:
    """Tr(rho * sum_kl A[k,l] X_k (x) conj(Y_l))."""
    n = realization.x_observables.shape[0]
    m = realization.y_observables.shape[0]
    if (n, m) != (matrix.rows, matrix.cols):
        raise DimensionMismatchError(
            f"realization has {n}x{m} observables, matrix is "
            f"{matrix.rows}x{matrix.cols}"
        )
    A = matrix.entries
    dim = realization.dim
    bell = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for k in range(n):
        for l in range(m):
            if A[k, l] != 0.0:
                bell += A[k, l] * np.kron(
                    realization.x_observables[k],
                    realization.y_observables[l].conj(),
                )
    value = np.einsum("ij,ji->", realization.state, bell)
    return float(value.real)


def realization_to_json(realization: ObservableRealization) -> dict:
    """Serializable dump with complex entries as [re, im] pairs."""

    def encode(array: np.ndarray) -> list:
        stacked = np.stack([array.real, array.imag], axis=-1)
        return stacked.tolist()

    return {
        "hilbert_dimension": realization.dim,
        "sites": {
            "x": int(realization.x_observables.shape[0]),
            "y": int(realization.y_observables.shape[0]),
        },
        "x_observables": encode(realization.x_observables),
        "y_observables": encode(realization.y_observables),
        "state": encode(realization.state),
    }
