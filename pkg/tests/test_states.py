import json

import numpy as np
import pytest

from conftest import brute_partial_trace
from operator_ssa.errors import InvalidSpecError, StateFileError
from operator_ssa.states import (
    STATE_KINDS,
    StateSpec,
    derive_seed,
    generate,
    haar_unitary,
    random_projector,
    read_state,
    resolve_rank,
    weyl_basis,
    write_state,
)

GENERATED_KINDS = [k for k in STATE_KINDS if k != 'file']


@pytest.mark.parametrize("kind", GENERATED_KINDS)
@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 2)])
def test_generated_states_are_density_matrices(kind, dims):
    if kind == 'ghz' and len(set(dims)) != 1:
        pytest.skip("ghz needs equal dimensions")
    rho = generate(StateSpec(kind, dims, seed=42))
    values = np.linalg.eigvalsh(rho.matrix)
    assert rho.dims.dims == dims
    assert values.min() >= -1e-12
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(rho.matrix, rho.matrix.conj().T)


def test_generation_is_deterministic_per_seed():
    a = generate(StateSpec('induced-mixed', (2, 2, 2), seed=9, rank=3))
    b = generate(StateSpec('induced-mixed', (2, 2, 2), seed=9, rank=3))
    c = generate(StateSpec('induced-mixed', (2, 2, 2), seed=10, rank=3))
    assert np.array_equal(a.matrix, b.matrix)
    assert not np.allclose(a.matrix, c.matrix)


@pytest.mark.parametrize("rank", [1, 3, 8])
def test_induced_mixed_rank(rank):
    rho = generate(StateSpec('induced-mixed', (2, 2, 2), seed=1, rank=rank))
    assert np.linalg.matrix_rank(rho.matrix, tol=1e-10) == rank


def test_rank_keywords():
    assert resolve_rank('half', 8) == 4
    assert resolve_rank('half', 1) == 1
    assert resolve_rank('full', 12) == 12
    assert StateSpec.from_token('induced-mixed:half', (3, 2, 2), 0).rank == 6
    with pytest.raises(InvalidSpecError):
        resolve_rank('most', 8)


@pytest.mark.parametrize("kwargs", [
    dict(kind='bell', dims=(2, 2, 2)),
    dict(kind='ghz', dims=(2, 3, 2)),
    dict(kind='induced-mixed', dims=(2, 2), rank=5),
    dict(kind='product-AB-C', dims=(4,)),
    dict(kind='file', dims=(2, 2, 2)),
    dict(kind='haar-pure', dims=(2, 2, 2), seed=-1),
])
def test_state_spec_validation(kwargs):
    with pytest.raises(InvalidSpecError):
        StateSpec(**kwargs)


def test_ghz_marginals():
    rho = generate(StateSpec('ghz', (2, 2, 2)))
    expected_bc = np.diag([0.5, 0, 0, 0.5])
    np.testing.assert_allclose(brute_partial_trace(rho.matrix, (2, 2, 2), [0]), expected_bc, atol=1e-15)


def test_product_kinds_factorize():
    dims = (2, 2, 3)
    rho = generate(StateSpec('product-AB-C', dims, seed=4)).matrix
    rho_ab = brute_partial_trace(rho, dims, [2])
    rho_c = brute_partial_trace(rho, dims, [0, 1])
    np.testing.assert_allclose(rho, np.kron(rho_ab, rho_c), atol=1e-14)

    rho = generate(StateSpec('product-A-BC', dims, seed=4)).matrix
    rho_a = brute_partial_trace(rho, dims, [1, 2])
    rho_bc = brute_partial_trace(rho, dims, [0])
    np.testing.assert_allclose(rho, np.kron(rho_a, rho_bc), atol=1e-14)


def test_classical_diagonal_is_diagonal():
    rho = generate(StateSpec('classical-diagonal', (2, 3, 2), seed=8)).matrix
    np.testing.assert_allclose(rho, np.diag(np.diag(rho)))


def test_derive_seed_depends_only_on_master_and_index():
    assert derive_seed(7, 3) == derive_seed(7, 3)
    seeds = {derive_seed(7, i) for i in range(100)}
    assert len(seeds) == 100
    assert derive_seed(7, 0) != derive_seed(8, 0)
    assert all(0 <= s < 2 ** 64 for s in seeds)


def test_haar_unitary_is_unitary():
    u = haar_unitary(5, 0)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


@pytest.mark.parametrize("d, rank", [(2, 1), (3, 2), (4, 4), (5, 3)])
def test_random_projector(d, rank):
    P = random_projector(d, rank, seed=d * 10 + rank)
    np.testing.assert_allclose(P @ P, P, atol=1e-12)
    np.testing.assert_allclose(P, P.conj().T)
    assert np.trace(P).real == pytest.approx(rank)


def test_random_projector_rank_bounds():
    with pytest.raises(InvalidSpecError):
        random_projector(3, 0, seed=1)
    with pytest.raises(InvalidSpecError):
        random_projector(3, 4, seed=1)


# --- Weyl basis -----------------------------------------------------------------------------------
@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_weyl_basis_is_orthogonal_unitary_basis(d):
    basis = weyl_basis(d)
    assert len(basis.elements) == d * d
    assert basis.unitarity_defect() <= 1e-12
    assert basis.orthogonality_defect() <= 1e-12


def test_weyl_basis_qubit_is_pauli_group_up_to_phase():
    basis = weyl_basis(2)
    x = np.array([[0, 1], [1, 0]])
    z = np.diag([1, -1])
    np.testing.assert_allclose(basis.elements[1], z, atol=1e-15)
    np.testing.assert_allclose(basis.elements[2], x, atol=1e-15)


# --- State file I/O -------------------------------------------------------------------------------
def test_state_file_round_trip_is_exact(tmp_path):
    rho = generate(StateSpec('induced-mixed', (2, 3, 2), seed=21, rank=4))
    path = tmp_path / "nested" / "state.json"
    write_state(path, rho)
    loaded = read_state(path)
    assert loaded.dims == rho.dims
    assert np.array_equal(loaded.matrix, rho.matrix)

    document = json.loads(path.read_text())
    assert list(document) == ['dims', 'matrix']
    assert len(document['matrix']) == 144


def test_file_kind_checks_dims(tmp_path):
    path = tmp_path / "s.json"
    write_state(path, generate(StateSpec('maximally-mixed', (2, 2, 2))))
    assert generate(StateSpec('file', (2, 2, 2), path=path)).n == 8
    with pytest.raises(InvalidSpecError):
        generate(StateSpec('file', (4, 2), path=path))


@pytest.mark.parametrize("content", [
    "not json",
    json.dumps({"dims": [2]}),
    json.dumps({"dims": [2], "matrix": [[1, 0], [0, 0], [0, 0]]}),
    json.dumps({"dims": [2], "matrix": [[1, 0], [0, 0], [0, 0], [1, 0]]}),
    json.dumps({"dims": [0], "matrix": []}),
])
def test_read_state_rejects_malformed_files(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    with pytest.raises(StateFileError):
        read_state(path)


def test_read_state_missing_file(tmp_path):
    with pytest.raises(StateFileError):
        read_state(tmp_path / "absent.json")
