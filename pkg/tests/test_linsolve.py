"""Full GMRES and the dense direct-solve oracle."""

import numpy as np
import pytest

from dielscat.linsolve import SingularMatrixError, direct_solve, gmres


def test_identity_one_iteration():
    b = np.array([1.0, 2.0, 3.0 + 1j])
    rep = gmres(np.eye(3), b, tol=1e-12)
    assert rep.iterations == 1 and rep.converged
    np.testing.assert_allclose(rep.solution, b, atol=1e-14)


def test_zero_rhs_short_circuits():
    rep = gmres(np.eye(4), np.zeros(4))
    assert rep.converged and rep.iterations == 0
    np.testing.assert_allclose(rep.solution, 0.0)


def test_diagonal_monotone_and_finite_termination():
    d = np.diag(np.arange(1.0, 21.0))
    rng = np.random.default_rng(0)
    b = rng.standard_normal(20)
    rep = gmres(d, b, tol=1e-13)
    assert rep.converged and rep.iterations <= 20
    assert np.all(np.diff(rep.residual_history) <= 1e-15)
    np.testing.assert_allclose(d @ rep.solution, b, atol=1e-11)


def test_random_complex_system_matches_direct():
    rng = np.random.default_rng(42)
    a = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
    a = a + 8.0 * np.eye(50)  # keep it well conditioned
    b = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    tol = 1e-10
    rep = gmres(a, b, tol=tol)
    x = direct_solve(a, b)
    assert rep.converged
    assert np.linalg.norm(rep.solution - x) <= 10 * tol * np.linalg.norm(x)


def test_matrix_action_interface():
    a = np.diag([2.0, 5.0, 9.0])
    b = np.array([2.0, 5.0, 9.0])
    rep = gmres(lambda v: a @ v, b, tol=1e-13)
    np.testing.assert_allclose(rep.solution, np.ones(3), atol=1e-12)


def test_max_iter_nonconvergence_reports_best_iterate():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((30, 30)) + 6.0 * np.eye(30)
    b = rng.standard_normal(30)
    rep = gmres(a, b, tol=1e-14, max_iter=3)
    assert not rep.converged and rep.iterations == 3
    assert len(rep.residual_history) == 3
    # the returned iterate is still the Krylov least-squares minimizer
    full = gmres(a, b, tol=1e-14)
    assert np.linalg.norm(b - a @ rep.solution) >= \
        np.linalg.norm(b - a @ full.solution)


def test_determinism():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((40, 40)) + 5.0 * np.eye(40)
    b = rng.standard_normal(40)
    r1 = gmres(a, b, tol=1e-9)
    r2 = gmres(a, b, tol=1e-9)
    assert r1.iterations == r2.iterations
    assert np.array_equal(r1.solution, r2.solution)


def test_direct_solve_examples():
    np.testing.assert_allclose(direct_solve(np.eye(3), np.arange(3.0)),
                               np.arange(3.0))
    perm = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(direct_solve(perm, np.array([1.0, 2.0])),
                               [2.0, 1.0])
    rng = np.random.default_rng(1)
    a = rng.standard_normal((25, 25)) + 4 * np.eye(25)
    b = rng.standard_normal(25)
    x = direct_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-12 * np.linalg.norm(b)


def test_direct_solve_singular():
    with pytest.raises(SingularMatrixError):
        direct_solve(np.zeros((3, 3)), np.ones(3))
