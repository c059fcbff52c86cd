# =================================================================================================
# File:          states.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Test-state inventory for the SSA operator: seeded random and named tripartite states, random
#   projectors, the clock-and-shift (Weyl) unitary basis used by the twirl, and the state file
#   format (read/write).
#
# Section Map:
#   1) Imports & constants
#   2) Domain types: StateSpec, UnitaryBasis
#   3) Seeding: per-trial seed derivation
#   4) Haar sampling: isometries, unitaries, induced-measure mixed states
#   5) Generators: generate(), random_projector(), weyl_basis()
#   6) State file I/O: schema-validated JSON documents
#
# Reproducibility:
#   Every generator draws from numpy's PCG64 (`default_rng`) seeded explicitly; campaigns derive
#   one seed per trial from (master_seed, trial_index) so execution order never matters.
# =================================================================================================

# --- Imports & constants --------------------------------------------------------------------------
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import jsonschema
import numpy as np

from . import reporting
from .config import ToleranceConfig
from .errors import InvalidSpecError, OperatorSSAError, StateFileError
from .tensor_core import DEFAULT_TOLERANCES, DensityMatrix, DimList, DimsLike, as_dimlist, hermitize

logger = logging.getLogger(__name__)

STATE_KINDS = (
    'haar-pure', 'induced-mixed', 'product-AB-C', 'product-A-BC', 'product-A-B-C',
    'classical-diagonal', 'ghz', 'maximally-mixed', 'file',
)
RANK_KEYWORDS = ('half', 'full')
SEED_LIMIT = 2 ** 64

STATE_FILE_SCHEMA = {
    "type": "object",
    "required": ["dims", "matrix"],
    "properties": {
        "dims": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
        "matrix": {
            "type": "array",
            "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}},
        },
    },
}

RngLike = Union[int, np.random.Generator]


def resolve_rank(value: Union[int, str, None], total: int) -> int:
    """Rank from an integer or the keywords 'half' (max(1, total // 2)) and 'full' (total)."""
    if value is None or value == 'full':
        return total
    if value == 'half':
        return max(1, total // 2)
    try:
        return int(value)
    except (TypeError, ValueError) as e:
        raise InvalidSpecError(f"Rank must be an integer or one of {RANK_KEYWORDS}, got {value!r}.") from e


# --- Domain types ---------------------------------------------------------------------------------
@dataclass(frozen=True)
class StateSpec:
    kind: str
    dims: DimList
    seed: int = 0
    rank: Optional[int] = None
    path: Optional[Path] = None

    def __post_init__(self):
        object.__setattr__(self, 'dims', as_dimlist(self.dims))
        if self.kind not in STATE_KINDS:
            raise InvalidSpecError(f"Unknown state kind {self.kind!r}; expected one of {STATE_KINDS}.")
        if not 0 <= int(self.seed) < SEED_LIMIT:
            raise InvalidSpecError(f"Seed must be a 64-bit unsigned integer, got {self.seed}.")
        total = self.dims.total
        if self.kind == 'induced-mixed':
            rank = resolve_rank(self.rank, total)
            if not 1 <= rank <= total:
                raise InvalidSpecError(f"induced-mixed rank {rank} outside 1..{total}.")
            object.__setattr__(self, 'rank', rank)
        if self.kind == 'ghz' and len(set(self.dims)) != 1:
            raise InvalidSpecError(f"ghz requires equal subsystem dimensions, got {self.dims.dims}.")
        if self.kind in ('product-AB-C', 'product-A-BC', 'product-A-B-C') and len(self.dims) < 2:
            raise InvalidSpecError(f"{self.kind} needs at least two subsystems.")
        if self.kind == 'file' and self.path is None:
            raise InvalidSpecError("kind 'file' requires a path.")

    @classmethod
    def from_token(cls, token: str, dims: DimsLike, seed: int) -> 'StateSpec':
        """Parse 'kind' or 'kind:rank' (e.g. 'induced-mixed:half')."""
        kind, _, rank = token.strip().partition(':')
        return cls(kind=kind, dims=as_dimlist(dims), seed=seed, rank=rank or None)


@dataclass(frozen=True, eq=False)
class UnitaryBasis:
    elements: Tuple[np.ndarray, ...]

    def __post_init__(self):
        elements = tuple(np.array(u, dtype=complex) for u in self.elements)
        d = elements[0].shape[0] if elements else 0
        if d == 0 or len(elements) != d * d:
            raise InvalidSpecError(f"A unitary basis of B(C^d) needs d^2 elements, got {len(elements)}.")
        for u in elements:
            u.setflags(write=False)
        object.__setattr__(self, 'elements', elements)

    @property
    def d(self) -> int:
        return self.elements[0].shape[0]

    def unitarity_defect(self) -> float:
        eye = np.eye(self.d)
        return max(float(np.linalg.norm(u @ u.conj().T - eye)) for u in self.elements)

    def orthogonality_defect(self) -> float:
        """max_ij |Tr(U_i U_j†) − d·δ_ij|."""
        stacked = np.stack([u.ravel() for u in self.elements])
        gram = stacked @ stacked.conj().T
        return float(np.max(np.abs(gram - self.d * np.eye(len(self.elements)))))


# --- Seeding --------------------------------------------------------------------------------------
def derive_seed(master_seed: int, trial_index: int) -> int:
    """64-bit per-trial seed; depends only on (master_seed, trial_index)."""
    sequence = np.random.SeedSequence([int(master_seed), int(trial_index)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _rng(seed: RngLike) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(int(seed))


# --- Haar sampling --------------------------------------------------------------------------------
def haar_isometry(rows: int, cols: int, rng: RngLike) -> np.ndarray:
    """Haar-distributed rows×cols isometry: QR of a complex Gaussian matrix, R's diagonal phase-fixed."""
    rng = _rng(rng)
    z = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_unitary(d: int, rng: RngLike) -> np.ndarray:
    return haar_isometry(d, d, rng)


def induced_mixed(n: int, rank: int, rng: RngLike) -> np.ndarray:
    """Haar pure state on system ⊗ rank-dim ancilla with the ancilla traced out."""
    psi = haar_isometry(n * rank, 1, rng)[:, 0].reshape(n, rank)
    return psi @ psi.conj().T


def _ghz(dims: DimList) -> np.ndarray:
    d = dims[0]
    psi = np.zeros(dims.total, dtype=complex)
    for j in range(d):
        psi[np.ravel_multi_index((j,) * len(dims), dims.dims)] = 1.0
    psi /= np.sqrt(d)
    return np.outer(psi, psi.conj())


def _product(blocks, rng: np.random.Generator) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for side in blocks:
        out = np.kron(out, induced_mixed(side, side, rng))
    return out


# --- Generators -----------------------------------------------------------------------------------
def generate(spec: StateSpec, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> DensityMatrix:
    dims, n = spec.dims, spec.dims.total
    rng = np.random.default_rng(spec.seed)

    if spec.kind == 'maximally-mixed':
        matrix = np.eye(n, dtype=complex) / n
    elif spec.kind == 'haar-pure':
        matrix = induced_mixed(n, 1, rng)
    elif spec.kind == 'induced-mixed':
        matrix = induced_mixed(n, spec.rank, rng)
    elif spec.kind == 'product-AB-C':
        matrix = _product([n // dims[-1], dims[-1]], rng)
    elif spec.kind == 'product-A-BC':
        matrix = _product([dims[0], n // dims[0]], rng)
    elif spec.kind == 'product-A-B-C':
        matrix = _product(list(dims), rng)
    elif spec.kind == 'classical-diagonal':
        matrix = np.diag(rng.dirichlet(np.ones(n))).astype(complex)
    elif spec.kind == 'ghz':
        matrix = _ghz(dims)
    else:
        state = read_state(spec.path, tol)
        if state.dims != dims:
            raise InvalidSpecError(f"State file dims {state.dims.dims} differ from requested {dims.dims}.")
        return state

    matrix = matrix / np.trace(matrix).real
    return DensityMatrix.validated(matrix, dims, tol)


def random_projector(d: int, rank: int, seed: RngLike) -> np.ndarray:
    if not 1 <= rank <= d:
        raise InvalidSpecError(f"Projector rank {rank} outside 1..{d}.")
    if rank == d:
        return np.eye(d, dtype=complex)
    v = haar_isometry(d, rank, seed)
    return hermitize(v @ v.conj().T).matrix


def weyl_basis(d: int) -> UnitaryBasis:
    """Clock-and-shift basis {X^a Z^b}: X|j> = |j+1 mod d>, Z = diag(ω^j), ω = exp(2πi/d)."""
    if d < 1:
        raise InvalidSpecError(f"Weyl basis needs d >= 1, got {d}.")
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return UnitaryBasis(tuple(
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        for a in range(d) for b in range(d)
    ))


# --- State file I/O -------------------------------------------------------------------------------
def write_state(path: Path, rho: DensityMatrix) -> None:
    document = {'dims': list(rho.dims), 'matrix': rho.matrix.ravel().tolist()}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as f:
        f.write(reporting.dumps(document) + "\n")
    logger.debug(f"Wrote {rho.dims.dims} state to {path}")


def read_state(path: Path, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> DensityMatrix:
    path = Path(path)
    try:
        with path.open('r', encoding='utf-8') as f:
            document = json.load(f)
        jsonschema.validate(document, STATE_FILE_SCHEMA)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as e:
        raise StateFileError(f"Cannot load state file '{path}': {e}") from e

    dims = DimList(tuple(document['dims']))
    entries = np.asarray(document['matrix'], dtype=float).reshape(-1, 2)
    if entries.shape[0] != dims.total ** 2:
        raise StateFileError(f"State file '{path}' has {entries.shape[0]} entries, expected {dims.total ** 2}.")
    matrix = (entries[:, 0] + 1j * entries[:, 1]).reshape(dims.total, dims.total)
    try:
        return DensityMatrix.validated(matrix, dims, tol)
    except OperatorSSAError as e:
        raise StateFileError(f"State file '{path}' is not a density matrix: {e}") from e
