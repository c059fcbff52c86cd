# =================================================================================================
# File:          modular.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Modular Hamiltonians Ĥ_X = −I_{X^c} ⊗ log ρ_X, the SSA operator
#   T_C = Tr_AB(ρ (Ĥ_AB + Ĥ_BC − Ĥ_B − Ĥ_ABC)), conditional mutual information, the Weyl twirl,
#   the projector-level inequality behind T_C ≥ 0 and the restricted-trace (non-Hermitian) witness.
#
# Section Map:
#   1) Imports & subsystem labels
#   2) Result types
#   3) Marginals, entropies, modular Hamiltonians
#   4) The SSA operator and conditional mutual information
#   5) Twirl
#   6) Projector-level checks (proof step, convexity chain)
#   7) Restricted-trace witness
#
# Operational Profile:
#   - Pure functions; no shared state; safe to call from worker threads.
#   - Tripartite states only where noted (index 0 = A, 1 = B, 2 = C).
# =================================================================================================

# --- Imports & subsystem labels -------------------------------------------------------------------
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Union

import numpy as np

from .config import ToleranceConfig
from .errors import (
    DimensionMismatchError,
    HermitizationDefectError,
    InvalidProjectorError,
    SupportViolationError,
)
from .perspective import quasi_entropy_direct
from .states import weyl_basis
from .tensor_core import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    DimList,
    DimsLike,
    HermitianOperator,
    as_dimlist,
    as_square,
    embed,
    hermitize,
    normalize_indices,
    partial_trace,
    support_log,
)

logger = logging.getLogger(__name__)

SUBSYSTEMS = {'A': 0, 'B': 1, 'C': 2}
# Ĥ labels used by the SSA combination, as index sets.
SSA_TERMS = {'AB': (0, 1), 'BC': (1, 2), 'B': (1,), 'ABC': (0, 1, 2)}

Subsystems = Union[str, Iterable[int]]


def subsystem_indices(S: Subsystems, count: int = 3) -> tuple:
    """'AB' -> (0, 1); index iterables pass through normalize_indices."""
    if isinstance(S, str):
        try:
            S = [SUBSYSTEMS[label] for label in S]
        except KeyError as e:
            raise DimensionMismatchError(f"Unknown subsystem label in {S!r}; use A, B, C.") from e
    return normalize_indices(S, count)


def _require_tripartite(rho: DensityMatrix) -> None:
    if len(rho.dims) != 3:
        raise DimensionMismatchError(f"Expected a tripartite state (A, B, C), got dims {rho.dims.dims}.")


# --- Result types ---------------------------------------------------------------------------------
@dataclass(frozen=True)
class ProofStep:
    """Both sides of Tr((I_A/d_A ⊗ ρ_BC)(Ĥ_B − Ĥ_BC)P_C) <= Tr(ρ(Ĥ_AB − Ĥ_ABC)P_C)."""
    lhs: float
    rhs: float
    lhs_direct: float          # Tr(ρ (Ĥ_B − Ĥ_BC) P_C), equal to lhs analytically
    imaginary_residual: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def lhs_gap(self) -> float:
        return abs(self.lhs - self.lhs_direct)


@dataclass(frozen=True)
class ChainStep:
    """Quasi-entropies along the joint-convexity argument, σ = ρ_AB ⊗ I_C/d_C, O = I_AB ⊗ P_C."""
    original: float      # Q(ρ, σ, O)
    twirled: float       # Q(I_A/d_A ⊗ ρ_BC, I_A/d_A ⊗ ρ_B ⊗ I_C/d_C, O)
    average: float       # (1/d_A²) Σ_i Q(U_i ρ U_i†, U_i σ U_i†, O)

    @property
    def convexity_margin(self) -> float:
        return self.average - self.twirled

    @property
    def invariance_gap(self) -> float:
        return abs(self.average - self.original)


@dataclass(frozen=True, eq=False)
class Witness:
    operator: np.ndarray
    defect: float


# --- Marginals, entropies, modular Hamiltonians ---------------------------------------------------
def marginal(rho: DensityMatrix, S: Subsystems) -> DensityMatrix:
    S = subsystem_indices(S, len(rho.dims))
    reduced = partial_trace(rho.matrix, rho.dims, rho.dims.complement(S))
    return DensityMatrix(hermitize(reduced).matrix, rho.dims.subset(S))


def von_neumann_entropy(rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """S(ρ) = −Tr(ρ·support_log(ρ))."""
    log_rho, _ = support_log(rho, tol)
    return float(-np.trace(rho.matrix @ log_rho.matrix).real)


def modular_hamiltonian(rho: DensityMatrix, S: Subsystems,
                        tol: ToleranceConfig = DEFAULT_TOLERANCES) -> HermitianOperator:
    """Ĥ_S = −I_{S^c} ⊗ log ρ_S on the full space."""
    S = subsystem_indices(S, len(rho.dims))
    if not S:
        raise DimensionMismatchError("Modular Hamiltonian needs a nonempty subsystem set.")
    dims = rho.dims
    reduced = partial_trace(rho.matrix, dims, dims.complement(S))
    log_op, support = support_log(reduced, tol, dims.subset(S))

    # Human: the formal −log diverges off-support; a state leaking there makes the trace meaningless.
    leak = float(1.0 - np.trace(rho.matrix @ embed(support, dims, S)).real)
    if leak > tol.match_tol:
        raise SupportViolationError(f"State leaks {leak:.3e} outside supp ρ_{S}.", leak)
    return HermitianOperator(embed(-log_op.matrix, dims, S), dims, log_op.defect)


def modular_terms(rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Dict[str, HermitianOperator]:
    _require_tripartite(rho)
    return {label: modular_hamiltonian(rho, S, tol) for label, S in SSA_TERMS.items()}


def ssa_combination(terms: Dict[str, HermitianOperator]) -> np.ndarray:
    """K = Ĥ_AB + Ĥ_BC − Ĥ_B − Ĥ_ABC."""
    return terms['AB'].matrix + terms['BC'].matrix - terms['B'].matrix - terms['ABC'].matrix


# --- The SSA operator and conditional mutual information ------------------------------------------
def ssa_operator(rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> HermitianOperator:
    """T_C = Tr_AB(ρ·K), hermitized; the hermitization defect must stay roundoff-sized."""
    _require_tripartite(rho)
    K = ssa_combination(modular_terms(rho, tol))
    reduced = partial_trace(rho.matrix @ K, rho.dims, (0, 1))
    T = hermitize(reduced, rho.dims.subset((2,)))
    if T.defect > tol.hermiticity_tol:
        raise HermitizationDefectError(
            f"Tr_AB(ρK) hermitization defect {T.defect:.3e} exceeds {tol.hermiticity_tol:.1e}.", T.defect)
    return T


def conditional_mutual_information(rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """I(A:C|B) = S(AB) + S(BC) − S(B) − S(ABC)."""
    _require_tripartite(rho)
    entropy = {label: von_neumann_entropy(marginal(rho, S), tol) for label, S in SSA_TERMS.items()}
    return entropy['AB'] + entropy['BC'] - entropy['B'] - entropy['ABC']


# --- Twirl ----------------------------------------------------------------------------------------
def twirl(rho: DensityMatrix, subsystem: int = 0) -> DensityMatrix:
    """(1/d²) Σ_i U_i ρ U_i† over the Weyl basis of one factor."""
    dims = rho.dims
    basis = weyl_basis(dims[subsystem])
    acc = np.zeros_like(rho.matrix)
    for u in basis.elements:
        full = embed(u, dims, (subsystem,))
        acc += full @ rho.matrix @ full.conj().T
    return DensityMatrix(hermitize(acc / len(basis.elements)).matrix, dims)


def twirl_A(rho: DensityMatrix) -> DensityMatrix:
    _require_tripartite(rho)
    return twirl(rho, 0)


def maximally_mixed_on(matrix: np.ndarray, dims: DimsLike, subsystem: int) -> np.ndarray:
    """I_s/d_s ⊗ Tr_s(M): what the twirl of factor s must produce."""
    dims = as_dimlist(dims)
    rest = dims.complement((subsystem,))
    return embed(partial_trace(matrix, dims, (subsystem,)), dims, rest) / dims[subsystem]


# --- Projector-level checks -----------------------------------------------------------------------
def _validated_projector(P_C, d: int, tol: ToleranceConfig) -> np.ndarray:
    P = as_square(P_C)
    if P.shape[0] != d:
        raise InvalidProjectorError(f"P_C must be {d}x{d}, got {P.shape}.")
    slack = tol.match_tol * max(1.0, float(np.linalg.norm(P)))
    if np.linalg.norm(P - P.conj().T) > slack or np.linalg.norm(P @ P - P) > slack:
        raise InvalidProjectorError("P_C is not an orthogonal projector (P² = P = P†).")
    return P


def _trace(*factors: np.ndarray) -> complex:
    product = factors[0]
    for f in factors[1:]:
        product = product @ f
    return complex(np.trace(product))


def proof_step_check(rho: DensityMatrix, P_C, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> ProofStep:
    _require_tripartite(rho)
    dims = rho.dims
    P = embed(_validated_projector(P_C, dims[2], tol), dims, (2,))
    H = modular_terms(rho, tol)
    tau = maximally_mixed_on(rho.matrix, dims, 0)

    left_op = (H['B'].matrix - H['BC'].matrix) @ P
    lhs = _trace(tau, left_op)
    rhs = _trace(rho.matrix, (H['AB'].matrix - H['ABC'].matrix) @ P)
    lhs_direct = _trace(rho.matrix, left_op)
    residual = max(abs(lhs.imag), abs(rhs.imag), abs(lhs_direct.imag))
    return ProofStep(lhs.real, rhs.real, lhs_direct.real, residual)


def convexity_chain_check(rho: DensityMatrix, P_C, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> ChainStep:
    """Evaluate the quasi-entropy before and after the A-twirl, and the twirl average."""
    _require_tripartite(rho)
    dims = rho.dims
    O = embed(_validated_projector(P_C, dims[2], tol), dims, (2,))
    sigma = maximally_mixed_on(rho.matrix, dims, 2)      # ρ_AB ⊗ I_C/d_C

    original = quasi_entropy_direct(rho.matrix, sigma, O, tol)
    twirled = quasi_entropy_direct(maximally_mixed_on(rho.matrix, dims, 0),
                                   maximally_mixed_on(sigma, dims, 0), O, tol)
    values = []
    for u in weyl_basis(dims[0]).elements:
        full = embed(u, dims, (0,))
        values.append(quasi_entropy_direct(full @ rho.matrix @ full.conj().T,
                                           full @ sigma @ full.conj().T, O, tol))
    return ChainStep(original, twirled, float(np.mean(values)))


# --- Restricted-trace witness ---------------------------------------------------------------------
def restricted_trace_witness(rho: DensityMatrix, traced: Subsystems,
                             tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Witness:
    """Tr_traced(ρ·K) without hermitization, and its defect ||X − X†||_F.

    traced='AB' is the Hermitian SSA operator; traced='A' or 'B' are the non-Hermitian variants.
    """
    _require_tripartite(rho)
    traced = subsystem_indices(traced)
    K = ssa_combination(modular_terms(rho, tol))
    X = partial_trace(rho.matrix @ K, rho.dims, traced)
    return Witness(X, float(np.linalg.norm(X - X.conj().T)))
