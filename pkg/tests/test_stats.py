import math

import numpy as np
import pytest
from scipy import stats as sps

import ggmrecon as gg
from ggmrecon.errors import OutOfRange, TooFewSamples, ZeroVariance

from conftest import (
    partial_corr_from_precision,
    population_residual_partial_corr,
    random_spd,
    sample_residual_partial_corr,
)


class TestDataMatrix:
    def test_shape_and_names(self):
        dm = gg.DataMatrix(np.zeros((3, 2)) + [[1, 2], [3, 4], [5, 6]], names=["a", "b"])
        assert dm.n == 3 and dm.p == 2

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            gg.DataMatrix(np.ones((1, 3)))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            gg.DataMatrix(np.array([[1.0, np.nan], [2.0, 3.0]]))


class TestPearsonMatrix:
    def test_identical_columns(self):
        x = np.array([[1.0, 1.0], [2.0, 2.0], [4.0, 4.0]])
        assert gg.pearson_matrix(x)[0, 1] == pytest.approx(1.0, abs=1e-15)

    def test_negated_column(self):
        x = np.array([[1.0, -1.0], [2.0, -2.0], [4.0, -4.0]])
        assert gg.pearson_matrix(x)[0, 1] == pytest.approx(-1.0, abs=1e-15)

    def test_hand_value(self):
        # x=(1,2,3), y=(1,3,2): centered cross product 1, each norm sqrt(2)
        x = np.array([[1.0, 1.0], [2.0, 3.0], [3.0, 2.0]])
        assert gg.pearson_matrix(x)[0, 1] == pytest.approx(0.5, abs=1e-15)

    def test_zero_variance(self):
        x = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
        with pytest.raises(ZeroVariance) as err:
            gg.pearson_matrix(x)
        assert err.value.column == 1

    def test_unit_diagonal_and_range(self, rng):
        x = rng.standard_normal((40, 8))
        r = gg.pearson_matrix(x)
        np.testing.assert_allclose(np.diagonal(r), 1.0)
        assert np.abs(r).max() <= 1.0


class TestEmpiricalCovariance:
    def test_constant_column_zeroed_when_centered(self):
        x = np.array([[1.0, 7.0], [2.0, 7.0], [5.0, 7.0]])
        s = gg.empirical_covariance(x, center=True)
        np.testing.assert_allclose(s[1], 0.0, atol=1e-15)
        np.testing.assert_allclose(s[:, 1], 0.0, atol=1e-15)

    def test_two_point_column(self):
        # centered (1, -1): (1 + 1) / 2 = 1
        s = gg.empirical_covariance(np.array([[1.0], [-1.0]]), center=True)
        assert s[0, 0] == pytest.approx(1.0, abs=1e-15)

    def test_centering_identity(self, rng):
        x = rng.standard_normal((30, 5)) + rng.uniform(-2, 2, size=5)
        s_unc = gg.empirical_covariance(x, center=False)
        s_cen = gg.empirical_covariance(x, center=True)
        mean = x.mean(axis=0)
        np.testing.assert_allclose(s_unc - s_cen, np.outer(mean, mean), atol=1e-12)

    def test_positive_semidefinite(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 12))
            p = int(rng.integers(2, 15))
            x = rng.standard_normal((n, p)) * rng.uniform(0.1, 10)
            s = gg.empirical_covariance(x, center=True)
            assert gg.min_eigenvalue(s) >= -1e-10


class TestFisherZ:
    def test_zero(self):
        assert gg.fisher_z(0.0) == 0.0

    def test_half(self):
        assert gg.fisher_z(0.5) == pytest.approx(0.5 * math.log(3.0), abs=1e-12)
        assert gg.fisher_z(0.5) == pytest.approx(0.5493061, abs=1e-7)

    def test_odd(self):
        for r in (0.1, 0.5, 0.93):
            assert gg.fisher_z(-r) == pytest.approx(-gg.fisher_z(r), abs=1e-15)

    def test_out_of_range(self):
        for bad in (1.0, -1.0, 1.5):
            with pytest.raises(OutOfRange):
                gg.fisher_z(bad)

    def test_strictly_increasing(self):
        grid = np.linspace(-0.999, 0.999, 1000)
        vals = np.array([gg.fisher_z(float(r)) for r in grid])
        assert np.all(np.diff(vals) > 0)


class TestPearsonCriticalR:
    def test_matches_t_test(self):
        # r exactly at the cutoff has a two-sided t-test p-value of alpha
        for n, alpha in ((20, 0.05), (50, 0.01), (10, 0.2)):
            r_crit = gg.pearson_critical_r(n, alpha)
            t = r_crit * math.sqrt((n - 2) / (1 - r_crit**2))
            p = 2 * sps.t.sf(t, n - 2)
            assert p == pytest.approx(alpha, rel=1e-10)

    def test_monotone_in_alpha(self):
        cuts = [gg.pearson_critical_r(30, a) for a in (0.001, 0.01, 0.1, 0.5, 0.999)]
        assert all(a > b for a, b in zip(cuts, cuts[1:]))


class TestStandardize:
    def test_unit_variance(self, rng):
        x = gg.DataMatrix(rng.standard_normal((25, 4)) * [1, 5, 0.2, 9] + 3)
        z = gg.standardize_columns(x)
        np.testing.assert_allclose(z.values.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(z.values.std(axis=0), 1.0, atol=1e-12)


class TestPartialCorrelationConsistency:
    """Cross-checks the precision-matrix identity against regression residuals."""

    def test_population_exact(self, rng):
        for _ in range(20):
            p = int(rng.integers(3, 7))
            omega = random_spd(rng, p)
            sigma = np.linalg.inv(omega)
            for i in range(p):
                for j in range(i + 1, p):
                    lhs = partial_corr_from_precision(omega, i, j)
                    rhs = population_residual_partial_corr(sigma, i, j)
                    assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_sampled(self, rng):
        omega = random_spd(rng, 4)
        sigma = np.linalg.inv(omega)
        x = gg.sample_gaussian(sigma, 100_000, rng).values
        for i in range(4):
            for j in range(i + 1, 4):
                lhs = partial_corr_from_precision(omega, i, j)
                rhs = sample_residual_partial_corr(x, i, j)
                assert lhs == pytest.approx(rhs, abs=2e-2)
