# =================================================================================================
# File:          tensor_core.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Dense complex tensor-product linear algebra: partial trace, subsystem embedding, the
#   support-restricted spectral logarithm, hermitization bookkeeping, inner products.
#
# Section Map:
#   1) Imports
#   2) Domain types: DimList, DensityMatrix, HermitianOperator
#   3) Index helpers
#   4) Core operations: partial_trace, embed, support_log, hermitize, min_eigenvalue, frobenius_inner
#
# Conventions:
#   - Subsystem index 0 = A, 1 = B, 2 = C; matrix indices run lexicographically over (a, b, c)
#     with the last factor fastest (numpy.kron order).
#   - Index sets are normalized to sorted tuples; an operator "on S" acts on the factors of S in
#     ascending order.
#   - Values are immutable after construction (arrays are flagged read-only).
# =================================================================================================

# --- Imports --------------------------------------------------------------------------------------
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .config import ToleranceConfig
from .errors import (
    DimensionMismatchError,
    EigensolverError,
    HermiticityError,
    NegativeEigenvalueError,
    TraceNormalizationError,
)

DEFAULT_TOLERANCES = ToleranceConfig()

# Dense operators above this side length are out of scope.
MAX_TOTAL_DIMENSION = 4096


# --- Domain types ---------------------------------------------------------------------------------
@dataclass(frozen=True)
class DimList:
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise DimensionMismatchError("DimList needs at least one subsystem.")
        if any(d < 1 for d in dims):
            raise DimensionMismatchError(f"Subsystem dimensions must be >= 1, got {dims}.")
        object.__setattr__(self, 'dims', dims)

    @classmethod
    def parse(cls, text: str) -> 'DimList':
        try:
            return cls(tuple(int(tok) for tok in text.split(',') if tok.strip()))
        except ValueError as e:
            raise DimensionMismatchError(f"Cannot parse dims from {text!r}.") from e

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def subset(self, indices: Iterable[int]) -> 'DimList':
        return DimList(tuple(self.dims[i] for i in normalize_indices(indices, len(self))))

    def complement(self, indices: Iterable[int]) -> Tuple[int, ...]:
        chosen = set(normalize_indices(indices, len(self)))
        return tuple(i for i in range(len(self)) if i not in chosen)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, i: int) -> int:
        return self.dims[i]


DimsLike = Union[DimList, Sequence[int]]


def as_dimlist(dims: DimsLike) -> DimList:
    return dims if isinstance(dims, DimList) else DimList(tuple(dims))


def _frozen_copy(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian PSD unit-trace matrix tagged with its tensor-factor dimensions.

    Build through `DensityMatrix.validated` whenever the matrix comes from outside the library;
    the plain constructor only checks shapes.
    """
    matrix: np.ndarray
    dims: DimList

    def __post_init__(self):
        object.__setattr__(self, 'dims', as_dimlist(self.dims))
        object.__setattr__(self, 'matrix', _frozen_copy(self.matrix))
        _check_side(self.matrix, self.dims)

    @classmethod
    def validated(cls, matrix, dims: DimsLike, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> 'DensityMatrix':
        arr = as_square(matrix)
        norm = float(np.linalg.norm(arr))
        defect = _antihermitian_norm(arr)
        if defect > tol.hermiticity_tol * max(1.0, norm):
            raise HermiticityError(f"Density matrix is not Hermitian (defect {defect:.3e}).")
        herm = hermitize(arr).matrix
        lowest = min_eigenvalue(herm)
        if lowest < tol.psd_threshold(norm):
            raise NegativeEigenvalueError(f"Density matrix has eigenvalue {lowest:.3e} below PSD slack.")
        trace = float(np.trace(herm).real)
        if abs(trace - 1.0) > tol.match_tol:
            raise TraceNormalizationError(f"Density matrix trace is {trace!r}, expected 1.")
        return cls(herm, dims)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Exactly Hermitian matrix plus the Frobenius norm of what hermitization discarded."""
    matrix: np.ndarray
    dims: DimList
    defect: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'dims', as_dimlist(self.dims))
        object.__setattr__(self, 'matrix', _frozen_copy(self.matrix))
        object.__setattr__(self, 'defect', float(self.defect))
        _check_side(self.matrix, self.dims)
        if not np.array_equal(self.matrix, self.matrix.conj().T):
            raise HermiticityError("HermitianOperator matrix must equal its conjugate transpose; use hermitize().")

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))


# --- Index helpers --------------------------------------------------------------------------------
def normalize_indices(indices: Iterable[int], count: int) -> Tuple[int, ...]:
    if isinstance(indices, (int, np.integer)):
        indices = (int(indices),)
    chosen = tuple(sorted({int(i) for i in indices}))
    bad = [i for i in chosen if i < 0 or i >= count]
    if bad:
        raise DimensionMismatchError(f"Subsystem indices {bad} out of range for {count} subsystems.")
    return chosen


def as_square(M) -> np.ndarray:
    arr = np.asarray(getattr(M, 'matrix', M), dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {arr.shape}.")
    return arr


def _check_side(matrix: np.ndarray, dims: DimList) -> None:
    if matrix.ndim != 2 or matrix.shape != (dims.total, dims.total):
        raise DimensionMismatchError(
            f"Matrix shape {matrix.shape} does not match dims {dims.dims} (total {dims.total}).")


def _antihermitian_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm((matrix - matrix.conj().T) / 2))


def _eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    try:
        return scipy.linalg.eigh(matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"Hermitian eigensolver failed: {e}") from e


# --- Core operations ------------------------------------------------------------------------------
def partial_trace(M, dims: DimsLike, traced: Iterable[int]) -> np.ndarray:
    """Trace out the factors in `traced`; kept factors stay in ascending order."""
    dims = as_dimlist(dims)
    matrix = as_square(M)
    _check_side(matrix, dims)
    k = len(dims)
    traced = set(normalize_indices(traced, k))
    kept = [i for i in range(k) if i not in traced]

    tensor = matrix.reshape(dims.dims + dims.dims)
    # Human: a traced factor reuses its row label on the column axis so einsum sums the diagonal.
    row_labels = list(range(k))
    col_labels = [i if i in traced else k + i for i in range(k)]
    out_labels = kept + [k + i for i in kept]
    reduced = np.einsum(tensor, row_labels + col_labels, out_labels)

    side = math.prod(dims[i] for i in kept)
    return np.array(reduced, dtype=complex).reshape(side, side)


def embed(op, dims: DimsLike, S: Iterable[int]) -> np.ndarray:
    """Place `op` (acting on the factors of S) into the full space, identity elsewhere."""
    dims = as_dimlist(dims)
    matrix = as_square(op)
    k = len(dims)
    S = list(normalize_indices(S, k))
    comp = list(dims.complement(S))
    expected = math.prod(dims[i] for i in S)
    if matrix.shape[0] != expected:
        raise DimensionMismatchError(
            f"Operator side {matrix.shape[0]} does not match subsystems {S} of dims {dims.dims}.")

    full = np.kron(matrix, np.eye(math.prod(dims[i] for i in comp)))
    order = S + comp
    shape = [dims[i] for i in order]
    inverse = [order.index(i) for i in range(k)]
    tensor = full.reshape(shape + shape).transpose(inverse + [k + p for p in inverse])
    return np.ascontiguousarray(tensor).reshape(dims.total, dims.total)


def hermitize(M, dims: Optional[DimsLike] = None) -> HermitianOperator:
    matrix = as_square(M)
    if dims is None:
        dims = getattr(M, 'dims', None) or DimList((matrix.shape[0],))
    herm = (matrix + matrix.conj().T) / 2
    return HermitianOperator(herm, dims, _antihermitian_norm(matrix))


def psd_spectrum(rho, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Validated eigendecomposition of a PSD matrix.

    Returns (eigenvalues ascending, eigenvectors as columns, on-support mask, hermiticity defect).
    An eigenvalue is on the support iff it exceeds support_cutoff_rel·λ_max.
    """
    matrix = as_square(rho)
    norm = float(np.linalg.norm(matrix))
    defect = _antihermitian_norm(matrix)
    if defect > tol.hermiticity_tol * max(1.0, norm):
        raise HermiticityError(f"PSD input is not Hermitian (defect {defect:.3e}).")

    values, vectors = _eigh((matrix + matrix.conj().T) / 2)
    if values[0] < tol.psd_threshold(norm):
        raise NegativeEigenvalueError(f"PSD input has eigenvalue {values[0]:.3e} below slack.")

    top = values[-1]
    on_support = values > tol.support_cutoff_rel * top if top > 0 else np.zeros(values.shape, dtype=bool)
    return values, vectors, on_support, defect


def support_log(rho, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                dims: Optional[DimsLike] = None) -> Tuple[HermitianOperator, np.ndarray]:
    """Spectral log on the support of a PSD matrix, 0 on its kernel (the 0·log 0 = 0 convention).

    Eigenvalues above support_cutoff_rel·λ_max map to log λ; the rest map to 0 and their
    eigenvectors span the kernel of the returned support projector.
    """
    values, vectors, on_support, defect = psd_spectrum(rho, tol)
    if dims is None:
        dims = getattr(rho, 'dims', None) or DimList((vectors.shape[0],))
    logs = np.zeros_like(values)
    logs[on_support] = np.log(values[on_support])

    log_matrix = (vectors * logs) @ vectors.conj().T
    basis = vectors[:, on_support]
    support = basis @ basis.conj().T
    log_op = HermitianOperator((log_matrix + log_matrix.conj().T) / 2, dims, defect)
    return log_op, hermitize(support).matrix


def min_eigenvalue(H) -> float:
    matrix = as_square(H)
    try:
        return float(scipy.linalg.eigvalsh(matrix, subset_by_index=[0, 0])[0])
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"Eigensolver failed on {matrix.shape} operator: {e}") from e


def frobenius_inner(X, Y) -> complex:
    """<X, Y> = Tr(X Y†)."""
    x, y = np.asarray(getattr(X, 'matrix', X)), np.asarray(getattr(Y, 'matrix', Y))
    if x.shape != y.shape:
        raise DimensionMismatchError(f"Inner product of mismatched shapes {x.shape} and {y.shape}.")
    return complex(np.vdot(y, x))
