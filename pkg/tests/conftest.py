"""Shared fixtures and brute-force oracles.

The oracles deliberately avoid operator_ssa.tensor_core: partial traces are explicit index sums and
logarithms come from numpy.linalg.eigh rather than scipy.
"""
import itertools
import math

import numpy as np
import pytest

from operator_ssa.config import ToleranceConfig
from operator_ssa.states import StateSpec, generate


def brute_partial_trace(matrix, dims, traced):
    """Index-sum partial trace; kept factors in ascending order."""
    dims = tuple(dims)
    kept = [i for i in range(len(dims)) if i not in set(traced)]
    kept_dims = [dims[i] for i in kept]
    side = math.prod(kept_dims)
    out = np.zeros((side, side), dtype=complex)
    for row in itertools.product(*[range(d) for d in dims]):
        for col in itertools.product(*[range(d) for d in dims]):
            if any(row[i] != col[i] for i in traced):
                continue
            r = np.ravel_multi_index([row[i] for i in kept], kept_dims) if kept else 0
            c = np.ravel_multi_index([col[i] for i in kept], kept_dims) if kept else 0
            out[r, c] += matrix[np.ravel_multi_index(row, dims), np.ravel_multi_index(col, dims)]
    return out


def dense_log(matrix, cutoff=1e-12):
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    logs = np.where(values > cutoff * values.max(), np.log(np.clip(values, 1e-300, None)), 0.0)
    return (vectors * logs) @ vectors.conj().T


def brute_ssa_operator(matrix, dims):
    """Tr_AB(ρ(Ĥ_AB + Ĥ_BC − Ĥ_B − Ĥ_ABC)) with every log placed by explicit Kronecker products."""
    d_a, d_b, d_c = dims
    eye = np.eye
    rho_ab = brute_partial_trace(matrix, dims, [2])
    rho_bc = brute_partial_trace(matrix, dims, [0])
    rho_b = brute_partial_trace(matrix, dims, [0, 2])
    h_ab = -np.kron(dense_log(rho_ab), eye(d_c))
    h_bc = -np.kron(eye(d_a), dense_log(rho_bc))
    h_b = -np.kron(np.kron(eye(d_a), dense_log(rho_b)), eye(d_c))
    h_abc = -dense_log(matrix)
    product = matrix @ (h_ab + h_bc - h_b - h_abc)
    return brute_partial_trace(product, dims, [0, 1])


def random_state(dims, seed, kind='induced-mixed', rank=None):
    return generate(StateSpec(kind, dims, seed, rank=rank))


@pytest.fixture
def tol():
    return ToleranceConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20251016)


@pytest.fixture(scope="session")
def ghz_state():
    return generate(StateSpec('ghz', (2, 2, 2)))


@pytest.fixture(scope="session")
def markov_state():
    """ρ_AB ⊗ ρ_C on [2,2,2]."""
    return generate(StateSpec('product-AB-C', (2, 2, 2), seed=11))
