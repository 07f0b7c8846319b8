import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ndtri

import ggmrecon as gg
from ggmrecon.errors import NonpositiveDiagonal, NotPositiveDefinite, OutOfRange

from conftest import random_spd


class TestInvertSpd:
    def test_identity(self):
        out = gg.invert_spd(np.eye(3))
        np.testing.assert_allclose(out, np.eye(3), atol=1e-14)

    def test_2x2_closed_form(self):
        m = np.array([[2.0, 1.0], [1.0, 2.0]])
        expected = np.array([[2 / 3, -1 / 3], [-1 / 3, 2 / 3]])
        np.testing.assert_allclose(gg.invert_spd(m), expected, atol=1e-14)

    def test_indefinite_raises(self):
        with pytest.raises(NotPositiveDefinite):
            gg.invert_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_near_singular_pivot_raises(self):
        m = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]])
        with pytest.raises(NotPositiveDefinite):
            gg.invert_spd(m)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 50))
    def test_roundtrip_random_spd(self, seed, dim):
        m = random_spd(np.random.default_rng(seed), dim)
        prod = m @ gg.invert_spd(m)
        assert np.abs(prod - np.eye(dim)).max() < 1e-8


class TestMinEigenvalue:
    def test_identity(self):
        assert gg.min_eigenvalue(np.eye(5)) == pytest.approx(1.0, abs=1e-12)

    def test_2x2_values(self):
        # eigenvalues of [[2,1],[1,2]] are {1, 3}
        assert gg.min_eigenvalue(np.array([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(1.0, abs=1e-12)
        # eigenvalues of [[0,1],[1,0]] are {-1, +1}
        assert gg.min_eigenvalue(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0, abs=1e-12)

    def test_matches_full_decomposition(self, rng):
        for _ in range(20):
            a = rng.standard_normal((12, 12))
            m = (a + a.T) / 2.0
            assert gg.min_eigenvalue(m) == pytest.approx(
                float(np.linalg.eigvalsh(m).min()), abs=1e-9
            )

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            gg.min_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestScaleMatrix:
    def test_correlation_fixed_point(self, rng):
        m = random_spd(rng, 6)
        c = gg.scale_matrix(m)
        np.testing.assert_allclose(gg.scale_matrix(c), c, atol=1e-12)
        np.testing.assert_allclose(np.diagonal(c), 1.0)

    def test_hand_example(self):
        m = np.array([[4.0, 2.0], [2.0, 9.0]])
        expected = np.array([[1.0, 1 / 3], [1 / 3, 1.0]])
        np.testing.assert_allclose(gg.scale_matrix(m), expected, atol=1e-15)

    def test_diagonal_becomes_identity(self):
        np.testing.assert_allclose(
            gg.scale_matrix(np.diag([3.0, 7.0, 0.2])), np.eye(3), atol=1e-15
        )

    def test_nonpositive_diagonal(self):
        with pytest.raises(NonpositiveDiagonal) as err:
            gg.scale_matrix(np.array([[1.0, 0.0], [0.0, -2.0]]))
        assert err.value.index == 1


class TestNormQuantile:
    def test_known_quantiles(self):
        assert gg.norm_ppf(0.975) == pytest.approx(1.959964, abs=1e-6)
        assert gg.norm_ppf(0.975) == pytest.approx(1.9599639845400545, abs=1e-12)
        assert gg.norm_ppf(0.995) == pytest.approx(2.5758293035489004, abs=1e-12)
        assert gg.norm_ppf(0.5) == pytest.approx(0.0, abs=1e-15)

    def test_against_reference_grid(self):
        grid = np.concatenate([
            np.linspace(1e-10, 1 - 1e-10, 1001),
            [1e-12, 1e-9, 1 - 1e-9, 0.02425, 0.97575],
        ])
        ours = np.array([gg.norm_ppf(float(q)) for q in grid])
        ref = ndtri(grid)
        assert np.abs(ours - ref).max() < 1e-9

    def test_out_of_range(self):
        for bad in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(OutOfRange):
                gg.norm_ppf(bad)

    def test_cdf_roundtrip(self):
        for q in (0.001, 0.3, 0.5, 0.72, 0.9999):
            assert float(gg.norm_cdf(gg.norm_ppf(q))) == pytest.approx(q, abs=1e-12)
