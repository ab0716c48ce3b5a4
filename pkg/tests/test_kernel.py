import numpy as np
import pytest
import scipy.integrate
import scipy.linalg

from fpopt import (
    InvalidMatrix,
    NotPositiveStable,
    NotSymmetric,
    expm,
    general_eigenvalues,
    kalman_rank,
    solve_continuous_lyapunov,
    spectral_norm,
    sym_eigen,
)
from helpers import random_admissible_pair, random_covariance, random_stable


# ---------------------------------------------------------------- expm

def test_expm_of_zero_is_identity():
    assert np.array_equal(expm(np.zeros((2, 2)), 5.0), np.eye(2))


def test_expm_diagonal():
    out = expm(np.diag([1.0, 2.0]), 1.0)
    assert np.abs(out - np.diag([np.exp(-1.0), np.exp(-2.0)])).max() <= 1e-15


def test_expm_matches_adaptive_ode_integration():
    # oracle: column-wise DOP853 integration of dx/dt = -a x
    a = np.array([[0.0, -3.0], [3.0, 2.0]])
    for t in (0.1, 1.0, 5.0):
        prop = expm(a, t)
        for j in range(2):
            sol = scipy.integrate.solve_ivp(
                lambda s, x: -(a @ x), (0.0, t), np.eye(2)[:, j],
                method="DOP853", rtol=1e-12, atol=1e-14)
            assert np.abs(prop[:, j] - sol.y[:, -1]).max() <= 1e-9


def test_expm_semigroup_property():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = random_stable(rng, 4)
        t, s = rng.uniform(0.0, 5.0, size=2)
        lhs = expm(a, t + s)
        rhs = expm(a, t) @ expm(a, s)
        assert np.linalg.norm(lhs - rhs) <= 1e-10


def test_expm_large_argument_against_spectral_route():
    # symmetric input, so an eigendecomposition gives an independent exact
    # exponential; checked up to ||a t|| = 50
    rng = np.random.default_rng(14)
    g = rng.normal(size=(5, 5))
    a = g + g.T
    a *= 10.0 / np.linalg.norm(a, 2)
    w, v = np.linalg.eigh(a)
    # the oracle's own eigenvalue error is amplified by t, so the two-sided
    # discrepancy bound loosens with the argument size
    for t, bound in ((1.0, 1e-12), (5.0, 5e-12)):
        reference = v @ np.diag(np.exp(-w * t)) @ v.T
        err = np.linalg.norm(expm(a, t) - reference) / np.linalg.norm(reference)
        assert err <= bound


def test_expm_rejects_nonfinite():
    with pytest.raises(InvalidMatrix):
        expm(np.array([[np.nan, 0.0], [0.0, 1.0]]), 1.0)
    with pytest.raises(ValueError):
        expm(np.eye(2), -1.0)


# ------------------------------------------------------- spectral_norm

def test_spectral_norm_identity_and_diagonal():
    assert spectral_norm(np.eye(4)) == pytest.approx(1.0, abs=1e-15)
    assert spectral_norm(np.diag([1.0, -3.0])) == pytest.approx(3.0, abs=1e-15)


def test_spectral_norm_against_gram_eigensolve():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(5, 5))
    gram_top = np.sqrt(np.linalg.eigvalsh(a.T @ a)[-1])
    assert abs(spectral_norm(a) - gram_top) <= 1e-12 * gram_top


def test_spectral_norm_submultiplicative():
    rng = np.random.default_rng(6)
    for _ in range(25):
        a = rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4))
        assert spectral_norm(a @ b) <= spectral_norm(a) * spectral_norm(b) + 1e-12


def test_spectral_norm_rejects_nonfinite():
    with pytest.raises(InvalidMatrix):
        spectral_norm(np.array([[np.inf, 0.0], [0.0, 1.0]]))


# ----------------------------------------------------------- sym_eigen

def test_sym_eigen_sorted_diagonal():
    w, v = sym_eigen(np.diag([2.0, 1.0]))
    assert np.allclose(w, [1.0, 2.0], atol=1e-15)
    assert np.abs(np.abs(v) - np.array([[0.0, 1.0], [1.0, 0.0]])).max() <= 1e-15


def test_sym_eigen_swap_matrix():
    w, _ = sym_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [-1.0, 1.0], atol=1e-15)


def test_sym_eigen_reconstruction_and_orthonormality():
    rng = np.random.default_rng(7)
    g = rng.normal(size=(6, 6))
    a = g + g.T
    w, v = sym_eigen(a)
    assert np.linalg.norm(v @ np.diag(w) @ v.T - a) <= 1e-11 * np.linalg.norm(a)
    assert np.linalg.norm(v.T @ v - np.eye(6)) <= 1e-12
    assert np.all(np.diff(w) >= 0.0)


def test_sym_eigen_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        sym_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


# -------------------------------------------------- general_eigenvalues

def test_eigenvalues_of_rotating_block():
    # drift block with spectrum 1 +- i sqrt(mu^2 - 1)
    mu = 2.6
    c = np.array([[2.0, mu / np.sqrt(2.0)], [-np.sqrt(2.0) * mu, 0.0]])
    eigs = np.sort_complex(general_eigenvalues(c))
    expected = np.sort_complex(np.array([1 - 1j * np.sqrt(mu**2 - 1),
                                         1 + 1j * np.sqrt(mu**2 - 1)]))
    assert np.abs(eigs - expected).max() <= 1e-9


def test_eigenvalues_diagonal():
    assert np.allclose(np.sort(general_eigenvalues(np.diag([3.0, 5.0])).real), [3.0, 5.0])


def test_eigenvalues_companion_matrix():
    # companion form of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    companion = np.array([[6.0, -11.0, 6.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    roots = np.sort(general_eigenvalues(companion).real)
    assert np.abs(roots - np.array([1.0, 2.0, 3.0])).max() <= 1e-9


# ------------------------------------------- solve_continuous_lyapunov

def test_lyapunov_identity_coefficients():
    q = solve_continuous_lyapunov(np.eye(3), np.eye(3))
    assert np.abs(q - np.eye(3)).max() <= 1e-12


def test_lyapunov_recovers_covariance_from_admissible_pair():
    # the stationarity equation of any admissible pair is solved by K itself
    rng = np.random.default_rng(8)
    cov = random_covariance(rng, 4)
    pair = random_admissible_pair(rng, cov)
    q = solve_continuous_lyapunov(pair.drift, pair.diffusion)
    assert np.linalg.norm(q - cov.matrix) <= 1e-10 * np.linalg.norm(cov.matrix)


def test_lyapunov_against_bartels_stewart():
    rng = np.random.default_rng(9)
    for _ in range(10):
        a = random_stable(rng, 5)
        g = rng.normal(size=(5, 5))
        b = g @ g.T
        q = solve_continuous_lyapunov(a, b)
        reference = scipy.linalg.solve_continuous_lyapunov(a, 2.0 * b)
        scale = np.linalg.norm(a) * np.linalg.norm(q) + np.linalg.norm(b)
        assert np.linalg.norm(a @ q + q @ a.T - 2.0 * b) <= 1e-10 * scale
        assert np.linalg.norm(q - reference) <= 1e-9 * max(np.linalg.norm(q), 1.0)


def test_lyapunov_solution_symmetric_psd():
    rng = np.random.default_rng(10)
    for _ in range(10):
        a = random_stable(rng, 4)
        g = rng.normal(size=(4, 4))
        b = g @ g.T
        q = solve_continuous_lyapunov(a, b)
        assert np.linalg.norm(q - q.T) <= 1e-12 * max(np.linalg.norm(q), 1.0)
        assert np.linalg.eigvalsh(q)[0] >= -1e-10


def test_lyapunov_rejects_unstable():
    with pytest.raises(NotPositiveStable):
        solve_continuous_lyapunov(-np.eye(2), np.eye(2))
    with pytest.raises(NotPositiveStable):
        solve_continuous_lyapunov(np.diag([1.0, 0.0]), np.eye(2))


# ----------------------------------------------------------- kalman_rank

def test_kalman_rank_detects_invariant_kernel():
    a = np.diag([1.0, 0.0])
    assert kalman_rank(a, a) is False


def test_kalman_rank_full_diffusion():
    rng = np.random.default_rng(12)
    assert kalman_rank(rng.normal(size=(3, 3)), np.eye(3)) is True


def test_kalman_rank_rank_one_diffusion():
    eps = 0.05
    drift = np.array([[0.0, -7.0 / np.sqrt(eps)], [7.0 * np.sqrt(eps), 2.0]])
    diffusion = np.diag([0.0, 2.0])
    assert kalman_rank(drift, diffusion) is True
    # oracle: explicit 2x4 block matrix rank
    block = np.hstack([diffusion, drift @ diffusion])
    assert np.linalg.matrix_rank(block) == 2


def test_kalman_rank_similarity_invariant():
    rng = np.random.default_rng(13)
    for _ in range(15):
        a = rng.normal(size=(4, 4))
        g = rng.normal(size=(4, 4))
        b = g @ g.T
        b[3, :] = 0.0
        b[:, 3] = 0.0
        s = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
        if np.linalg.cond(s) > 50:
            continue
        transformed = kalman_rank(s @ a @ np.linalg.inv(s), s @ b @ s.T)
        assert transformed == kalman_rank(a, b)
