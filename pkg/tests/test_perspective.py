import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_log
from operator_ssa import perspective
from operator_ssa.errors import DimensionMismatchError, InvalidSpecError, SupportViolationError, UndefinedLimitError
from operator_ssa.modular import marginal
from operator_ssa.perspective import (
    XLOGX,
    OperatorConvexF,
    Superoperator,
    commutator_norm,
    devectorize,
    joint_convexity_trial,
    left_superop,
    operator_convex,
    perspective_form,
    perspective_general,
    perspective_xlogx,
    quasi_entropy,
    quasi_entropy_direct,
    right_superop,
    superop_log,
    vectorize,
)
from operator_ssa.states import induced_mixed

FUNCTIONS = ['xlogx', 'neglog', 'square', 'power(1.5)']


def _random_pair(n, rng):
    return induced_mixed(n, n, rng), induced_mixed(n, n, rng)


def _random_matrix(n, rng, normalized=False):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return M / np.linalg.norm(M) if normalized else M


# --- Vectorization & multiplication superoperators ------------------------------------------------
def test_vectorization_is_row_major():
    X = np.arange(6).reshape(2, 3)
    np.testing.assert_array_equal(vectorize(X), [0, 1, 2, 3, 4, 5])
    with pytest.raises(DimensionMismatchError):
        devectorize(np.zeros(5))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_left_and_right_multiplication(n, rng):
    rho, sigma = _random_pair(n, rng)
    X = _random_matrix(n, rng)
    L, R = left_superop(rho), right_superop(sigma)
    np.testing.assert_allclose(L.apply(X), rho @ X, atol=1e-13)
    np.testing.assert_allclose(R.apply(X), X @ sigma, atol=1e-13)
    assert commutator_norm(L, R) <= 1e-12


def test_left_superop_of_identity_is_identity():
    np.testing.assert_array_equal(left_superop(np.eye(3)).matrix, np.eye(9))


def test_superoperator_rejects_wrong_shapes():
    with pytest.raises(DimensionMismatchError):
        Superoperator(np.eye(8), 3)
    with pytest.raises(DimensionMismatchError):
        left_superop(np.eye(2)).apply(np.eye(3))


# --- superop_log ----------------------------------------------------------------------------------
def test_superop_log_of_identity_vanishes():
    np.testing.assert_allclose(superop_log(left_superop(np.eye(3))).matrix, np.zeros((9, 9)), atol=1e-14)


def test_superop_log_of_half_identity(rng):
    X = _random_matrix(2, rng)
    log_l = superop_log(left_superop(np.eye(2) / 2))
    np.testing.assert_allclose(log_l.apply(X), -math.log(2) * X, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_superop_log_matches_spectral_log(n, rng):
    rho, sigma = _random_pair(n, rng)
    X = _random_matrix(n, rng)
    np.testing.assert_allclose(superop_log(left_superop(rho)).apply(X), dense_log(rho) @ X, atol=1e-11)
    np.testing.assert_allclose(superop_log(right_superop(sigma)).apply(X), X @ dense_log(sigma), atol=1e-11)


def test_superop_log_rejects_non_multiplication_form(rng):
    rho, sigma = _random_pair(2, rng)
    with pytest.raises(InvalidSpecError):
        superop_log(left_superop(rho) @ right_superop(sigma))


# --- perspective_xlogx & quasi_entropy ------------------------------------------------------------
@pytest.mark.parametrize("n", [2, 3])
def test_perspective_xlogx_action_and_self_adjointness(n, rng):
    rho, sigma = _random_pair(n, rng)
    g = perspective_xlogx(rho, sigma)
    X, Y = _random_matrix(n, rng), _random_matrix(n, rng)
    expected = rho @ dense_log(rho) @ X - rho @ X @ dense_log(sigma)
    np.testing.assert_allclose(g.apply(X), expected, atol=1e-11)
    lhs = np.vdot(Y, g.apply(X))
    rhs = np.conj(np.vdot(X, g.apply(Y)))
    assert abs(lhs - rhs) <= 1e-11


def test_perspective_xlogx_matches_eigenbasis_construction(rng):
    for n in (2, 3, 4):
        for _ in range(10):
            rho, sigma = _random_pair(n, rng)
            np.testing.assert_allclose(perspective_xlogx(rho, sigma).matrix,
                                       perspective_general(XLOGX, rho, sigma).matrix, atol=1e-10)


def test_quasi_entropy_of_equal_pair_vanishes(rng):
    rho, _ = _random_pair(3, rng)
    assert quasi_entropy(rho, rho, np.eye(3)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_quasi_entropy_pure_against_maximally_mixed(d):
    pure = np.zeros((d, d))
    pure[0, 0] = 1.0
    assert quasi_entropy(pure, np.eye(d) / d, np.eye(d)) == pytest.approx(math.log(d), abs=1e-10)


def test_quasi_entropy_zero_operator(rng):
    rho, sigma = _random_pair(3, rng)
    assert quasi_entropy(rho, sigma, np.zeros((3, 3))) == 0.0


def test_quasi_entropy_ghz_marginal(ghz_state):
    rho_ab = marginal(ghz_state, 'AB').matrix
    assert quasi_entropy(rho_ab, np.eye(4) / 4, np.eye(4)) == pytest.approx(math.log(2), abs=1e-10)


def test_quasi_entropy_superoperator_and_direct_paths_agree(rng):
    for _ in range(100):
        n = int(rng.integers(2, 5))
        rho, sigma = _random_pair(n, rng)
        O = _random_matrix(n, rng, normalized=True)
        assert quasi_entropy(rho, sigma, O) == pytest.approx(quasi_entropy_direct(rho, sigma, O), abs=1e-11)


def test_support_violation_for_relative_entropy():
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([1.0, 0.0])
    with pytest.raises(SupportViolationError):
        perspective_xlogx(rho, sigma)
    with pytest.raises(SupportViolationError):
        quasi_entropy_direct(sigma, sigma, np.array([[0, 1], [1, 0]]))


def test_quasi_entropy_takes_one_support_log_per_matrix(monkeypatch, rng):
    calls = []
    original = perspective.support_log

    def counting(*args, **kwargs):
        calls.append(1)
        return original(*args, **kwargs)

    monkeypatch.setattr(perspective, 'support_log', counting)
    rho, sigma = _random_pair(3, rng)
    quasi_entropy(rho, sigma, _random_matrix(3, rng))
    assert len(calls) == 2
    calls.clear()
    quasi_entropy_direct(rho, sigma, _random_matrix(3, rng))
    assert len(calls) == 2


def test_quasi_entropy_rejects_operator_leaking_off_support():
    sigma = np.diag([1.0, 0.0])
    with pytest.raises(SupportViolationError):
        quasi_entropy(sigma, sigma, np.array([[0, 1], [1, 0]]))


# --- Operator-convex functions & general perspectives ---------------------------------------------
@pytest.mark.parametrize("name, label", [
    ('xlogx', 'xlogx'), ('neglog', 'neglog'), ('square', 'square'), ('power(1.5)', 'power(1.5)'), ('power(2)', 'power(2)'),
])
def test_operator_convex_parsing(name, label):
    f = operator_convex(name)
    assert f.label == label
    assert f.spot_check()


@pytest.mark.parametrize("name", ['cube', 'power(0.5)', 'power(2.5)', 'power()'])
def test_operator_convex_rejects_unsupported(name):
    with pytest.raises(InvalidSpecError):
        operator_convex(name)


def test_square_perspective_with_identity_sigma(rng):
    rho, _ = _random_pair(3, rng)
    X = _random_matrix(3, rng)
    g = perspective_general(OperatorConvexF('square'), rho, np.eye(3))
    np.testing.assert_allclose(g.apply(X), rho @ rho @ X, atol=1e-12)


def test_neglog_form_of_equal_pair(rng):
    rho, _ = _random_pair(3, rng)
    assert perspective_form(operator_convex('neglog'), rho, rho, np.eye(3)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", FUNCTIONS)
def test_eigenvalue_formula(name, rng):
    f = operator_convex(name)
    rho, sigma = _random_pair(3, rng)
    lam, u = np.linalg.eigh(rho)
    mu, v = np.linalg.eigh(sigma)
    assert min(np.diff(lam).min(), np.diff(mu).min()) > 1e-8
    g = perspective_general(f, rho, sigma)
    for i in range(3):
        for j in range(3):
            E = np.outer(u[:, i], v[:, j].conj())
            expected = mu[j] * float(f(lam[i] / mu[j]))
            np.testing.assert_allclose(g.apply(E), expected * E, atol=1e-10)


def test_undefined_limits():
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([1.0, 0.0])
    with pytest.raises(UndefinedLimitError):
        perspective_general(XLOGX, rho, sigma)
    with pytest.raises(UndefinedLimitError):
        perspective_general(operator_convex('neglog'), sigma, rho)
    with pytest.raises(UndefinedLimitError):
        perspective_form(XLOGX, rho, sigma, np.eye(2))
    # O annihilates the kernel of σ, so the infinite eigenpair carries no weight.
    O = np.diag([1.0, 0.0])
    assert perspective_form(XLOGX, rho, sigma, O) == pytest.approx(-0.5 * math.log(2))


# --- Joint convexity ------------------------------------------------------------------------------
@pytest.mark.parametrize("name", FUNCTIONS)
def test_joint_convexity_campaign(name, rng):
    f = operator_convex(name)
    for _ in range(500):
        n = int(rng.integers(2, 5))
        pair1, pair2 = _random_pair(n, rng), _random_pair(n, rng)
        c = float(rng.uniform())
        O = _random_matrix(n, rng, normalized=True)
        assert joint_convexity_trial(pair1, pair2, c, O, f) >= -1e-9


@pytest.mark.parametrize("name", FUNCTIONS)
def test_joint_convexity_degenerate_mixtures(name, rng):
    f = operator_convex(name)
    pair1, pair2 = _random_pair(3, rng), _random_pair(3, rng)
    O = _random_matrix(3, rng)
    assert abs(joint_convexity_trial(pair1, pair2, 0.0, O, f)) <= 1e-11
    assert abs(joint_convexity_trial(pair1, pair2, 1.0, O, f)) <= 1e-11
    assert abs(joint_convexity_trial(pair1, pair1, 0.3, O, f)) <= 1e-11


def test_joint_convexity_rejects_bad_weight(rng):
    pair = _random_pair(2, rng)
    with pytest.raises(InvalidSpecError):
        joint_convexity_trial(pair, pair, 1.5, np.eye(2))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.floats(min_value=0.0, max_value=1.0))
def test_xlogx_joint_convexity_property(seed, c):
    rng = np.random.default_rng(seed)
    pair1, pair2 = _random_pair(2, rng), _random_pair(2, rng)
    O = _random_matrix(2, rng)
    assert joint_convexity_trial(pair1, pair2, c, O) >= -1e-9
