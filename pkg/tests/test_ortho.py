import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import polygauss as pg

GRID3 = pg.SampleGrid(np.array([0.0, 1.0, 2.0]))
H3_J2 = np.array([
    [5 / 6, 1 / 3, -1 / 6],
    [1 / 3, 1 / 3, 1 / 3],
    [-1 / 6, 1 / 3, 5 / 6],
])


def gram_schmidt_oracle(t, J):
    """Independent construction: classical Gram-Schmidt on the monomials."""
    V = np.vander(t, J, increasing=True).astype(float)
    B = np.zeros_like(V.T)
    for j in range(J):
        v = V[:, j].copy()
        for i in range(j):
            v -= (B[i] @ V[:, j]) / (B[i] @ B[i]) * B[i]
        B[j] = v
    return B


class TestBuildBasis:
    def test_worked_three_point_j2(self):
        b = pg.build_basis(GRID3, 2)
        npt.assert_allclose(b.values[0], [1, 1, 1], atol=1e-15)
        npt.assert_allclose(b.values[1], [-1, 0, 1], atol=1e-15)
        npt.assert_allclose(b.norms, [3, 2], atol=1e-15)
        assert b.recurrence_a[0] == pytest.approx(1.0, abs=1e-15)

    def test_worked_three_point_j3(self):
        b = pg.build_basis(GRID3, 3)
        npt.assert_allclose(b.values[2], [1 / 3, -2 / 3, 1 / 3], atol=1e-14)
        assert b.norms[2] == pytest.approx(2 / 3, abs=1e-14)
        assert abs(b.values[2] @ b.values[1]) < 1e-14
        assert abs(b.values[2] @ b.values[0]) < 1e-14

    def test_order_one_is_constant(self):
        grid = pg.SampleGrid(np.sort(np.random.default_rng(0).uniform(0, 5, 17)))
        b = pg.build_basis(grid, 1)
        npt.assert_array_equal(b.values[0], np.ones(17))
        assert b.norms[0] == 17

    def test_matches_gram_schmidt_oracle(self):
        rng = np.random.default_rng(7)
        t = np.sort(rng.uniform(-2, 3, 25))
        grid = pg.SampleGrid(t)
        b = pg.build_basis(grid, 6)
        oracle = gram_schmidt_oracle(t, 6)
        for j in range(6):
            # same polynomial up to the leading-coefficient convention
            scale = b.values[j] @ oracle[j] / (oracle[j] @ oracle[j])
            npt.assert_allclose(b.values[j], scale * oracle[j], atol=1e-9)

    @pytest.mark.parametrize("N,J", [(16, 8), (64, 16), (256, 32), (1024, 32)])
    def test_orthogonality(self, N, J):
        grid = pg.SampleGrid.uniform(N, 0.15)
        b = pg.build_basis(grid, J)
        G = b.values @ b.values.T
        bound = 1e-10 * np.sqrt(np.outer(b.norms, b.norms))
        off = np.abs(G - np.diag(np.diag(G)))
        assert np.all(off <= bound)

    def test_degree_is_exact(self):
        grid = pg.SampleGrid.uniform(12, 1.0)
        b = pg.build_basis(grid, 5)
        for j in range(5):
            coeffs = np.polynomial.polynomial.polyfit(grid.points, b.values[j], j)
            recon = np.polynomial.polynomial.polyval(grid.points, coeffs)
            npt.assert_allclose(recon, b.values[j], atol=1e-8)

    def test_order_out_of_range(self):
        with pytest.raises(pg.OrderRangeError):
            pg.build_basis(GRID3, 4)
        with pytest.raises(pg.OrderRangeError):
            pg.build_basis(GRID3, 0)

    def test_degenerate_grid(self):
        t = np.arange(40) * 1e-30
        t[0] = 0.0
        with pytest.raises(pg.DegenerateGridError):
            pg.build_basis(pg.SampleGrid(t), 12)

    def test_grid_validation(self):
        with pytest.raises(pg.ConfigError):
            pg.SampleGrid(np.array([0.0, 0.0, 1.0]))
        with pytest.raises(pg.ConfigError):
            pg.SampleGrid(np.array([1.0]))


class TestProjectionOperator:
    def test_worked_three_point(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 2))
        npt.assert_allclose(op.xi, H3_J2, atol=1e-14)
        assert np.trace(op.xi) == pytest.approx(2.0, abs=1e-14)

    def test_full_basis_is_identity(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 3))
        npt.assert_allclose(op.xi, np.eye(3), atol=1e-12)

    def test_order_one_is_averaging(self):
        grid = pg.SampleGrid(np.array([0.0, 0.3, 1.1, 4.0]))
        op = pg.projection_operator(pg.build_basis(grid, 1))
        npt.assert_allclose(op.xi, np.full((4, 4), 0.25), atol=1e-15)

    @pytest.mark.parametrize("J", [2, 5, 9, 20])
    def test_projection_laws(self, J):
        grid = pg.SampleGrid.uniform(60, 0.15)
        b = pg.build_basis(grid, J)
        H = pg.projection_operator(b).xi
        npt.assert_array_equal(H, H.T)
        assert np.max(np.abs(H @ H - H)) <= 1e-10
        assert abs(np.trace(H) - J) <= 1e-9
        npt.assert_allclose(H.sum(axis=1), np.ones(60), atol=1e-10)
        for j in range(J):
            npt.assert_allclose(H @ b.values[j], b.values[j], atol=1e-10)

    def test_xi_matches_dense_construction(self):
        grid = pg.SampleGrid.uniform(8, 0.5)
        b = pg.build_basis(grid, 4)
        H = pg.projection_operator(b).xi
        manual = np.zeros((8, 8))
        for n in range(8):
            for m in range(8):
                manual[n, m] = sum(b.values[j, n] * b.values[j, m] / b.norms[j]
                                   for j in range(4))
        npt.assert_allclose(H, manual, atol=1e-13)
        assert np.isfinite(np.max(np.abs(H)))


class TestTransform:
    def test_worked_impulse(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 2))
        y = pg.transform(op, pg.Sequence(np.array([1.0, 0.0, 0.0]), GRID3))
        npt.assert_allclose(y.values, [5 / 6, 1 / 3, -1 / 6], atol=1e-12)

    def test_linear_data_reproduced(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 2))
        y = pg.transform(op, pg.Sequence(np.array([0.0, 1.0, 2.0]), GRID3))
        npt.assert_allclose(y.values, [0, 1, 2], atol=1e-13)

    def test_full_order_identity(self):
        grid = pg.SampleGrid.uniform(20, 0.1)
        op = pg.projection_operator(pg.build_basis(grid, 20))
        x = np.random.default_rng(3).standard_normal(20)
        y = pg.transform(op, pg.Sequence(x, grid))
        npt.assert_allclose(y.values, x, atol=1e-10)

    def test_coefficient_route_matches_dense(self):
        grid = pg.SampleGrid.uniform(60, 0.15)
        op = pg.projection_operator(pg.build_basis(grid, 9))
        rng = np.random.default_rng(11)
        for _ in range(5):
            x = rng.standard_normal(60)
            y = pg.transform(op, pg.Sequence(x, grid))
            npt.assert_allclose(y.values, op.xi @ x, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-1, 1), min_size=5, max_size=5))
    def test_polynomial_reproduction(self, alphas):
        grid = pg.SampleGrid.uniform(40, 0.15)
        J = len(alphas)
        x = np.polynomial.polynomial.polyval(grid.points, alphas)
        op = pg.projection_operator(pg.build_basis(grid, J))
        y = pg.transform(op, pg.Sequence(x, grid))
        npt.assert_allclose(y.values, x, atol=1e-9)

    def test_linearity(self):
        grid = pg.SampleGrid.uniform(30, 0.2)
        op = pg.projection_operator(pg.build_basis(grid, 6))
        rng = np.random.default_rng(5)
        x1, x2 = rng.standard_normal((2, 30))
        a, b = 2.5, -0.75
        lhs = pg.transform(op, pg.Sequence(a * x1 + b * x2, grid)).values
        rhs = (a * pg.transform(op, pg.Sequence(x1, grid)).values
               + b * pg.transform(op, pg.Sequence(x2, grid)).values)
        npt.assert_allclose(lhs, rhs, atol=1e-12)

    def test_length_mismatch(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 2))
        other = pg.SampleGrid.uniform(4, 1.0)
        with pytest.raises(pg.DimensionError):
            pg.transform(op, pg.Sequence(np.zeros(4), other))

    def test_error_process_matches_mixing_sum(self):
        # with zero signal the transform output equals the coefficient-mixed noise
        grid = pg.SampleGrid.uniform(60, 0.15)
        op = pg.projection_operator(pg.build_basis(grid, 7))
        rng = np.random.default_rng(17)
        for _ in range(20):
            w = rng.standard_normal(60)
            e = pg.transform(op, pg.Sequence(w, grid)).values
            npt.assert_allclose(e, op.xi @ w, atol=1e-12)


class TestErrorCovariance:
    def test_white_noise_gives_projector(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 2))
        cov = pg.error_covariance(op, np.eye(3))
        npt.assert_allclose(cov, H3_J2, atol=1e-12)
        npt.assert_allclose(np.diag(cov), [5 / 6, 1 / 3, 5 / 6], atol=1e-12)
        assert np.trace(cov) == pytest.approx(2.0, abs=1e-12)

    def test_idempotence_for_scaled_white(self):
        grid = pg.SampleGrid.uniform(25, 0.3)
        op = pg.projection_operator(pg.build_basis(grid, 8))
        cov = pg.error_covariance(op, 2.7 * np.eye(25))
        npt.assert_allclose(cov, 2.7 * op.xi, atol=1e-10)

    def test_zero_covariance(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 2))
        npt.assert_array_equal(pg.error_covariance(op, np.zeros((3, 3))), np.zeros((3, 3)))

    def test_full_order_passthrough(self):
        grid = pg.SampleGrid.uniform(10, 1.0)
        op = pg.projection_operator(pg.build_basis(grid, 10))
        A = np.random.default_rng(2).standard_normal((10, 10))
        S = A @ A.T
        npt.assert_allclose(pg.error_covariance(op, S), S, atol=1e-10 * np.max(np.abs(S)))

    def test_asymmetric_rejected(self):
        op = pg.projection_operator(pg.build_basis(GRID3, 2))
        S = np.eye(3)
        S[0, 1] = 1e-3
        with pytest.raises(pg.InvalidCovarianceError):
            pg.error_covariance(op, S)


class TestSelectOrder:
    def test_oracle_noiseless(self):
        g = pg.Sequence(np.array([0.0, 1.0, 4.0]), GRID3)
        sel = pg.select_order(GRID3, "oracle", range(1, 4), signal=g, noise_var=0.0)
        risks = [r for _, r in sel.risk_curve]
        npt.assert_allclose(risks, [26 / 9, 2 / 9, 0.0], atol=1e-12)
        assert sel.chosen == 3

    def test_oracle_with_noise(self):
        g = pg.Sequence(np.array([0.0, 1.0, 4.0]), GRID3)
        sel = pg.select_order(GRID3, "oracle", range(1, 4), signal=g, noise_var=1.0)
        risks = [r for _, r in sel.risk_curve]
        npt.assert_allclose(risks, [29 / 9, 8 / 9, 1.0], atol=1e-12)
        assert sel.chosen == 2

    def test_fixed_passthrough(self):
        grid = pg.SampleGrid.uniform(10, 1.0)
        sel = pg.select_order(grid, "fixed", fixed_order=5)
        assert sel.chosen == 5
        assert len(sel.risk_curve) == 1

    def test_penalized_prefers_true_degree(self):
        grid = pg.SampleGrid.uniform(50, 0.1)
        rng = np.random.default_rng(23)
        x = 1.0 + 2.0 * grid.points - 0.5 * grid.points**2 + 0.05 * rng.standard_normal(50)
        sel = pg.select_order(grid, "penalized", range(1, 13),
                              observed=pg.Sequence(x, grid), noise_var=0.05**2)
        assert sel.chosen == 3

    def test_errors(self):
        g = pg.Sequence(np.zeros(3), GRID3)
        with pytest.raises(pg.ConfigError):
            pg.select_order(GRID3, "oracle", [], signal=g, noise_var=1.0)
        with pytest.raises(pg.ConfigError):
            pg.select_order(GRID3, "oracle", [1, 2], signal=g, noise_var=-1.0)
        with pytest.raises(pg.ConfigError):
            pg.select_order(GRID3, "bogus", [1, 2])
