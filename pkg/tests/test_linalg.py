"""Dense symmetric kernel tests.

Derived-value checks go through independent oracles (explicit
reconstruction, a nonsymmetric dense solve, finite differences) rather
than re-calling the code under test.
"""

import numpy as np
import pytest

from mvle.errors import NonSymmetricError, SingularDegreeError, SingularMatrixError
from mvle.linalg import generalized_eig_diag, ridge_solve, sym_eig


def random_symmetric(rng, n):
    a = rng.normal(size=(n, n))
    return (a + a.T) / 2.0


def random_laplacian(rng, n):
    # Random connected-ish weighted graph Laplacian: PSD with D_ii > 0.
    w = rng.uniform(0.0, 1.0, size=(n, n))
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    d = w.sum(axis=1)
    return np.diag(d) - w, d


class TestSymEig:
    def test_identity_eigenvalues(self):
        res = sym_eig(np.eye(3))
        assert np.allclose(res.values, [1.0, 1.0, 1.0], atol=1e-12)

    def test_two_by_two_closed_form(self):
        res = sym_eig(np.array([[1.0, -1.0], [-1.0, 1.0]]))
        assert np.allclose(res.values, [0.0, 2.0], atol=1e-12)
        v0 = res.vectors[:, 0]
        v1 = res.vectors[:, 1]
        assert abs(abs(v0 @ np.array([1.0, 1.0]) / np.sqrt(2.0)) - 1.0) < 1e-12
        assert abs(abs(v1 @ np.array([1.0, -1.0]) / np.sqrt(2.0)) - 1.0) < 1e-12

    def test_reconstruction_oracle(self):
        # Oracle: rebuild A from the spectral factorization entry by entry.
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = random_symmetric(rng, 10)
            res = sym_eig(a)
            rebuilt = res.vectors @ np.diag(res.values) @ res.vectors.T
            assert np.max(np.abs(rebuilt - a)) < 1e-8

    def test_eigen_residual_and_orthonormality(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            a = random_symmetric(rng, 8)
            res = sym_eig(a)
            scale = np.max(np.abs(a)) + 1.0
            for j in range(8):
                resid = a @ res.vectors[:, j] - res.values[j] * res.vectors[:, j]
                assert np.max(np.abs(resid)) < 1e-8 * scale
            gram = res.vectors.T @ res.vectors
            assert np.max(np.abs(gram - np.eye(8))) < 1e-8

    def test_values_ascending(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            res = sym_eig(random_symmetric(rng, 9))
            assert np.all(np.diff(res.values) >= -1e-12)

    def test_trace_identity(self):
        rng = np.random.default_rng(14)
        for _ in range(25):
            a = random_symmetric(rng, 7)
            res = sym_eig(a)
            scale = max(abs(np.trace(a)), 1.0)
            assert abs(res.values.sum() - np.trace(a)) < 1e-8 * scale

    def test_one_ulp_asymmetry_tolerated(self):
        a = random_symmetric(np.random.default_rng(15), 6)
        a[0, 1] += 1e-13
        res = sym_eig(a)
        assert res.values.shape == (6,)

    def test_nonsymmetric_rejected(self):
        a = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(NonSymmetricError):
            sym_eig(a)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            sym_eig(np.zeros((2, 3)))

    def test_nonfinite_rejected(self):
        a = np.array([[1.0, np.nan], [np.nan, 1.0]])
        with pytest.raises(ValueError):
            sym_eig(a)


class TestGeneralizedEigDiag:
    def test_identity_degree_reduces_to_sym_eig(self):
        res = generalized_eig_diag(np.array([[1.0, -1.0], [-1.0, 1.0]]), np.ones(2))
        assert np.allclose(res.values, [0.0, 2.0], atol=1e-12)

    def test_scaling_identity(self):
        lap = np.array([[2.0, -2.0], [-2.0, 2.0]])
        res = generalized_eig_diag(lap, np.array([2.0, 2.0]))
        assert np.allclose(res.values, [0.0, 2.0], atol=1e-12)
        v0 = res.vectors[:, 0]
        assert abs(v0[0] - v0[1]) < 1e-12

    def test_brute_force_oracle(self):
        # Oracle: dense nonsymmetric eig of D^-1 L, a different math route
        # from the whitening used inside generalized_eig_diag.
        rng = np.random.default_rng(21)
        for _ in range(15):
            lap, d = random_laplacian(rng, 15)
            res = generalized_eig_diag(lap, d)
            brute = np.sort(np.linalg.eig(np.diag(1.0 / d) @ lap)[0].real)
            assert np.max(np.abs(res.values - brute)) < 1e-8

    def test_d_orthonormality(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            lap, d = random_laplacian(rng, 12)
            res = generalized_eig_diag(lap, d)
            gram = res.vectors.T @ np.diag(d) @ res.vectors
            assert np.max(np.abs(gram - np.eye(12))) < 1e-8

    def test_generalized_residual(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            lap, d = random_laplacian(rng, 10)
            res = generalized_eig_diag(lap, d)
            scale = np.max(np.abs(lap)) + 1.0
            for j in range(10):
                resid = lap @ res.vectors[:, j] - res.values[j] * (d * res.vectors[:, j])
                assert np.max(np.abs(resid)) < 1e-8 * scale

    def test_diag_matrix_argument_accepted(self):
        lap, d = random_laplacian(np.random.default_rng(24), 6)
        res_vec = generalized_eig_diag(lap, d)
        res_mat = generalized_eig_diag(lap, np.diag(d))
        assert np.allclose(res_vec.values, res_mat.values, atol=1e-12)

    def test_nonpositive_degree_rejected(self):
        lap = np.array([[1.0, -1.0], [-1.0, 1.0]])
        with pytest.raises(SingularDegreeError):
            generalized_eig_diag(lap, np.array([1.0, 0.0]))
        with pytest.raises(SingularDegreeError):
            generalized_eig_diag(lap, np.array([1.0, -2.0]))


class TestRidgeSolve:
    def test_identity_design_lambda_zero(self):
        t = np.random.default_rng(31).normal(size=(4, 3))
        b = ridge_solve(np.eye(4), t, 0.0)
        assert np.allclose(b, t, atol=1e-10)

    def test_identity_design_lambda_one(self):
        t = np.random.default_rng(32).normal(size=(5, 2))
        b = ridge_solve(np.eye(5), t, 1.0)
        assert np.allclose(b, t / 2.0, atol=1e-10)

    def test_gradient_oracle(self):
        # Oracle: central finite differences of the ridge objective at B.
        rng = np.random.default_rng(33)
        h = rng.normal(size=(20, 5))
        t = rng.normal(size=(20, 3))
        lam = 0.1
        b = ridge_solve(h, t, lam)

        def objective(mat):
            return np.sum((h @ mat - t) ** 2) + lam * np.sum(mat**2)

        eps = 1e-6
        for i in range(5):
            for j in range(3):
                plus = b.copy()
                plus[i, j] += eps
                minus = b.copy()
                minus[i, j] -= eps
                grad = (objective(plus) - objective(minus)) / (2.0 * eps)
                assert abs(grad) < 1e-8 * max(1.0, abs(objective(b)))

    def test_solution_is_local_minimum(self):
        rng = np.random.default_rng(34)
        h = rng.normal(size=(15, 4))
        t = rng.normal(size=(15, 2))
        b = ridge_solve(h, t, 0.5)
        base = np.sum((h @ b - t) ** 2) + 0.5 * np.sum(b**2)
        for _ in range(100):
            pert = b + 1e-4 * rng.normal(size=b.shape)
            value = np.sum((h @ pert - t) ** 2) + 0.5 * np.sum(pert**2)
            assert base <= value + 1e-12

    def test_one_dim_target(self):
        rng = np.random.default_rng(35)
        h = rng.normal(size=(10, 3))
        t = rng.normal(size=10)
        b = ridge_solve(h, t, 0.2)
        assert b.shape == (3,)
        b2 = ridge_solve(h, t[:, None], 0.2)
        assert np.allclose(b, b2[:, 0], atol=1e-12)

    def test_rank_deficient_lambda_zero_rejected(self):
        h = np.ones((6, 3))
        t = np.ones((6, 2))
        with pytest.raises(SingularMatrixError):
            ridge_solve(h, t, 0.0)

    def test_rank_deficient_with_ridge_succeeds(self):
        h = np.ones((6, 3))
        t = np.ones((6, 2))
        b = ridge_solve(h, t, 1e-2)
        assert np.all(np.isfinite(b))

    def test_negative_lambda_rejected(self):
        with pytest.raises(ValueError):
            ridge_solve(np.eye(2), np.eye(2), -1.0)
