# =================================================================================================
# File:          perspective.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Superoperator machinery for operator perspectives: left/right multiplication superoperators,
#   their logarithms, the perspective g(L, R) = f(L/R)·R of an operator-convex f, the quasi-entropy
#   quadratic form, and the joint-convexity trial harness.
#
# Section Map:
#   1) Imports
#   2) Vectorization & the Superoperator type
#   3) Operator-convex functions
#   4) Multiplication superoperators and their logs
#   5) Perspectives & quasi-entropies
#   6) Joint-convexity trials
#
# Conventions:
#   Row-major vectorization: entry (i, j) of an n×n matrix is coordinate i·n + j. In this
#   convention L_ρ = ρ ⊗ I and R_σ = I ⊗ σᵀ.
# =================================================================================================

# --- Imports --------------------------------------------------------------------------------------
import math
import re
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import ToleranceConfig
from .errors import DimensionMismatchError, InvalidSpecError, SupportViolationError, UndefinedLimitError
from .tensor_core import DEFAULT_TOLERANCES, as_square, frobenius_inner, hermitize, psd_spectrum, support_log

logger = logging.getLogger(__name__)


# --- Vectorization & the Superoperator type -------------------------------------------------------
def vectorize(X) -> np.ndarray:
    return np.asarray(X, dtype=complex).reshape(-1)


def devectorize(v, n: Optional[int] = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    n = math.isqrt(v.size) if n is None else n
    if n * n != v.size:
        raise DimensionMismatchError(f"Vector of length {v.size} is not a vectorized square matrix.")
    return v.reshape(n, n)


@dataclass(frozen=True, eq=False)
class Superoperator:
    matrix: np.ndarray
    n: int
    convention: str = 'row-major'

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex, copy=True)
        if matrix.shape != (self.n * self.n, self.n * self.n):
            raise DimensionMismatchError(f"Superoperator on {self.n}x{self.n} matrices needs shape "
                                         f"{(self.n ** 2, self.n ** 2)}, got {matrix.shape}.")
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    def apply(self, X) -> np.ndarray:
        x = as_square(X)
        if x.shape[0] != self.n:
            raise DimensionMismatchError(f"Cannot apply a superoperator on {self.n}x{self.n} to {x.shape}.")
        return devectorize(self.matrix @ vectorize(x), self.n)

    def __matmul__(self, other: 'Superoperator') -> 'Superoperator':
        return Superoperator(self.matrix @ other.matrix, self.n)

    def __add__(self, other: 'Superoperator') -> 'Superoperator':
        return Superoperator(self.matrix + other.matrix, self.n)

    def __sub__(self, other: 'Superoperator') -> 'Superoperator':
        return Superoperator(self.matrix - other.matrix, self.n)

    def adjoint_defect(self) -> float:
        """||G − G†||_F; zero iff G is Hermitian for the Frobenius inner product."""
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T))


def commutator_norm(a: Superoperator, b: Superoperator) -> float:
    return float(np.linalg.norm(a.matrix @ b.matrix - b.matrix @ a.matrix))


# --- Operator-convex functions --------------------------------------------------------------------
FUNCTION_NAMES = ('xlogx', 'neglog', 'square', 'power')
_POWER_PATTERN = re.compile(r'^power\(\s*([0-9.eE+-]+)\s*\)$')


@dataclass(frozen=True)
class OperatorConvexF:
    """f(x) for x > 0 with the limit rules its perspective g(λ, μ) = μ·f(λ/μ) needs at 0.

    xlogx, square, power(t):  g(0, μ) = 0;  g(λ > 0, 0) = +inf
    neglog:                   g(λ, 0) = 0;  g(0, μ > 0) = +inf
    """
    name: str
    exponent: Optional[float] = None

    def __post_init__(self):
        if self.name not in FUNCTION_NAMES:
            raise InvalidSpecError(f"Unknown operator-convex function {self.name!r}.")
        if self.name == 'power':
            if self.exponent is None or not 1.0 < float(self.exponent) <= 2.0:
                raise InvalidSpecError(f"power(t) needs t in (1, 2], got {self.exponent!r}.")
            object.__setattr__(self, 'exponent', float(self.exponent))
        elif self.exponent is not None:
            raise InvalidSpecError(f"{self.name} takes no exponent.")

    @property
    def label(self) -> str:
        return f"power({self.exponent:g})" if self.name == 'power' else self.name

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.name == 'xlogx':
            return x * np.log(x)
        if self.name == 'neglog':
            return -np.log(x)
        if self.name == 'square':
            return x * x
        return x ** self.exponent

    def perspective_table(self, lam: np.ndarray, mu: np.ndarray,
                          lam_zero: np.ndarray, mu_zero: np.ndarray) -> np.ndarray:
        """Matrix g[i, j] = μ_j·f(λ_i/μ_j) with the limit rules; +inf marks undefined limits."""
        lam_grid, mu_grid = np.meshgrid(lam, mu, indexing='ij')
        lz, mz = np.meshgrid(lam_zero, mu_zero, indexing='ij')
        table = np.zeros(lam_grid.shape)
        both = ~lz & ~mz
        table[both] = mu_grid[both] * self(lam_grid[both] / mu_grid[both])
        if self.name == 'neglog':
            table[lz & ~mz] = np.inf
        else:
            table[~lz & mz] = np.inf
        return table

    def spot_check(self, grid: Optional[np.ndarray] = None) -> bool:
        """Midpoint convexity f((x+y)/2) <= (f(x)+f(y))/2 on all pairs of a positive grid."""
        grid = np.geomspace(1e-3, 1e3, 25) if grid is None else np.asarray(grid, dtype=float)
        x, y = np.meshgrid(grid, grid)
        mid = self((x + y) / 2)
        avg = (self(x) + self(y)) / 2
        return bool(np.all(mid <= avg + 1e-12 * np.maximum(1.0, np.abs(avg))))


XLOGX = OperatorConvexF('xlogx')


def operator_convex(name: str) -> OperatorConvexF:
    """Parse 'xlogx', 'neglog', 'square' or 'power(t)'."""
    name = name.strip()
    match = _POWER_PATTERN.match(name)
    if match:
        return OperatorConvexF('power', float(match.group(1)))
    return OperatorConvexF(name)


# --- Multiplication superoperators and their logs -------------------------------------------------
def _side(matrix: np.ndarray, n: Optional[int]) -> int:
    if n is not None and matrix.shape[0] != n:
        raise DimensionMismatchError(f"Expected a {n}x{n} matrix, got {matrix.shape}.")
    return matrix.shape[0]


def left_superop(rho, n: Optional[int] = None) -> Superoperator:
    """L: X -> ρX."""
    matrix = as_square(rho)
    n = _side(matrix, n)
    return Superoperator(np.kron(matrix, np.eye(n)), n)


def right_superop(sigma, n: Optional[int] = None) -> Superoperator:
    """R: X -> Xσ."""
    matrix = as_square(sigma)
    n = _side(matrix, n)
    return Superoperator(np.kron(np.eye(n), matrix.T), n)


def _multiplication_factor(S: Superoperator, tol: ToleranceConfig) -> Tuple[str, np.ndarray]:
    n = S.n
    blocks = S.matrix.reshape(n, n, n, n)
    slack = tol.match_tol * max(1.0, float(np.linalg.norm(S.matrix)))
    eye = np.eye(n)

    left = blocks[:, 0, :, 0]
    if np.linalg.norm(S.matrix - np.kron(left, eye)) <= slack:
        return 'left', left
    right_t = blocks[0, :, 0, :]
    if np.linalg.norm(S.matrix - np.kron(eye, right_t)) <= slack:
        return 'right', right_t.T
    raise InvalidSpecError("Superoperator is neither a left nor a right multiplication.")


def superop_log(S: Superoperator, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Superoperator:
    """log L_ρ = L_{log ρ} and log R_σ = R_{log σ}, logs support-restricted."""
    side, factor = _multiplication_factor(S, tol)
    log_factor, _ = support_log(factor, tol)
    if side == 'left':
        return left_superop(log_factor.matrix, S.n)
    return right_superop(log_factor.matrix, S.n)


# --- Perspectives & quasi-entropies ---------------------------------------------------------------
def _pair(rho, sigma) -> Tuple[np.ndarray, np.ndarray]:
    r, s = as_square(rho), as_square(sigma)
    if r.shape != s.shape:
        raise DimensionMismatchError(f"ρ {r.shape} and σ {s.shape} must have the same size.")
    return r, s


def _check_support(rho: np.ndarray, sigma_support: np.ndarray, tol: ToleranceConfig,
                   O: Optional[np.ndarray] = None) -> None:
    """Reject pairs where the formal −log σ diverges against ρ (or against O†ρO when O is given)."""
    kernel = np.eye(rho.shape[0]) - sigma_support
    leak = float(np.trace(rho @ kernel).real)
    if leak > tol.match_tol:
        raise SupportViolationError(f"supp ρ is not inside supp σ (leak {leak:.3e}); D(ρ||σ) = +inf.", leak)
    if O is not None:
        leak = float(np.trace(O.conj().T @ rho @ O @ kernel).real)
        if leak > tol.match_tol:
            raise SupportViolationError(f"O†ρO leaks outside supp σ (leak {leak:.3e}).", leak)


def _xlogx_logs(r: np.ndarray, s: np.ndarray, tol: ToleranceConfig,
                O: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Support logs of ρ and σ after the support check; one spectral pass per matrix."""
    log_rho, _ = support_log(r, tol)
    log_sigma, supp_sigma = support_log(s, tol)
    _check_support(r, supp_sigma, tol, O)
    return log_rho.matrix, log_sigma.matrix


def _xlogx_superop(r: np.ndarray, log_rho: np.ndarray, log_sigma: np.ndarray) -> Superoperator:
    n = r.shape[0]
    rho_log_rho = hermitize(r @ log_rho).matrix
    return Superoperator(np.kron(rho_log_rho, np.eye(n)) - np.kron(r, log_sigma.T), n)


def perspective_xlogx(rho, sigma, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Superoperator:
    """g(L, R) = L log L − L log R, i.e. X -> ρ log ρ X − ρ X log σ."""
    r, s = _pair(rho, sigma)
    return _xlogx_superop(r, *_xlogx_logs(r, s, tol))


def quasi_entropy(rho, sigma, O, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """<g(L,R) O, O> = Tr(ρ log ρ O O† − ρ O log σ O†) through the superoperator."""
    r, s = _pair(rho, sigma)
    o = as_square(O)
    g = _xlogx_superop(r, *_xlogx_logs(r, s, tol, o))
    value = frobenius_inner(g.apply(o), o)
    if abs(value.imag) > tol.match_tol * max(1.0, abs(value.real)):
        logger.warning(f"quasi_entropy imaginary part {value.imag:.3e} exceeds match_tol")
    return float(value.real)


def quasi_entropy_direct(rho, sigma, O, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Direct trace formula; n×n work only, no superoperator."""
    r, s = _pair(rho, sigma)
    o = as_square(O)
    log_rho, log_sigma = _xlogx_logs(r, s, tol, o)
    o_dag = o.conj().T
    value = np.trace(r @ log_rho @ o @ o_dag) - np.trace(r @ o @ log_sigma @ o_dag)
    return float(value.real)


def _eigen_pair(rho, sigma, tol: ToleranceConfig):
    r, s = _pair(rho, sigma)
    lam, u, lam_support, _ = psd_spectrum(r, tol)
    mu, v, mu_support, _ = psd_spectrum(s, tol)
    lam = np.where(lam_support, lam, 0.0)
    mu = np.where(mu_support, mu, 0.0)
    return lam, u, ~lam_support, mu, v, ~mu_support


def perspective_general(f: OperatorConvexF, rho, sigma,
                        tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Superoperator:
    """g(L, R) = f(L/R)·R built in the simultaneous eigenbasis of the commuting L and R.

    With ρ = Σ λ_i |u_i><u_i| and σ = Σ μ_j |v_j><v_j|, |u_i><v_j| is an eigenvector of g with
    eigenvalue μ_j·f(λ_i/μ_j). R is never inverted.
    """
    lam, u, lam_zero, mu, v, mu_zero = _eigen_pair(rho, sigma, tol)
    table = f.perspective_table(lam, mu, lam_zero, mu_zero)
    if np.isinf(table).any():
        i, j = map(int, np.argwhere(np.isinf(table))[0])
        raise UndefinedLimitError(
            f"{f.label} perspective is infinite at λ={lam[i]:.3e}, μ={mu[j]:.3e} (eigenpair {i},{j}).")
    # vec(|u_i><v_j|) = u_i ⊗ conj(v_j) in row-major order; column i·n + j matches table.ravel().
    basis = np.kron(u, v.conj())
    n = lam.size
    return Superoperator((basis * table.ravel()) @ basis.conj().T, n)


def perspective_form(f: OperatorConvexF, rho, sigma, O,
                     tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """<g(L,R) O, O> = Σ_ij g(λ_i, μ_j)·|<u_i|O|v_j>|²; an infinite g only matters with weight."""
    lam, u, lam_zero, mu, v, mu_zero = _eigen_pair(rho, sigma, tol)
    weights = np.abs(u.conj().T @ as_square(O) @ v) ** 2
    table = f.perspective_table(lam, mu, lam_zero, mu_zero)
    divergent = np.isinf(table) & (weights > tol.match_tol)
    if divergent.any():
        raise UndefinedLimitError(f"{f.label} quasi-entropy diverges: O has weight on an infinite eigenpair.")
    return float(np.sum(np.where(np.isinf(table), 0.0, table) * weights))


# --- Joint-convexity trials -----------------------------------------------------------------------
def joint_convexity_trial(pair1, pair2, c: float, O, f: OperatorConvexF = XLOGX,
                          tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """margin = c·Q(ρ1,σ1) + (1−c)·Q(ρ2,σ2) − Q(cρ1+(1−c)ρ2, cσ1+(1−c)σ2); Q = perspective form of f."""
    if not 0.0 <= c <= 1.0:
        raise InvalidSpecError(f"Mixing weight c must lie in [0, 1], got {c}.")
    (rho1, sigma1), (rho2, sigma2) = (_pair(*pair1), _pair(*pair2))
    if rho1.shape != rho2.shape:
        raise DimensionMismatchError("Both pairs must act on the same space.")
    mixed_rho = c * rho1 + (1.0 - c) * rho2
    mixed_sigma = c * sigma1 + (1.0 - c) * sigma2

    q1 = perspective_form(f, rho1, sigma1, O, tol)
    q2 = perspective_form(f, rho2, sigma2, O, tol)
    q_mixed = perspective_form(f, mixed_rho, mixed_sigma, O, tol)
    return c * q1 + (1.0 - c) * q2 - q_mixed
