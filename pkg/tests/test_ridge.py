import numpy as np
import pytest

import ggmrecon as gg
from ggmrecon.edges import pair_arrays, pair_index
from ggmrecon.ridge import draw_null_permutations


class TestRidgePartialCorrelations:
    def test_identity_input(self):
        part = gg.ridge_partial_correlations(np.eye(5), 2.0)
        np.testing.assert_allclose(part, np.eye(5), atol=1e-15)

    def test_small_penalty_recovers_correlation(self):
        r = 0.62
        s = np.array([[1.0, r], [r, 1.0]])
        part = gg.ridge_partial_correlations(s, 1e-10)
        assert part[0, 1] == pytest.approx(r, abs=1e-6)

    def test_large_penalty_shrinks_to_zero(self, rng):
        s = gg.empirical_covariance(rng.standard_normal((30, 6)))
        part = gg.ridge_partial_correlations(s, 1e8)
        off = part[pair_arrays(6)]
        assert np.abs(off).max() < 1e-6

    def test_offdiagonals_strictly_inside_unit_interval(self, rng):
        s = gg.empirical_covariance(rng.standard_normal((10, 25)))  # singular s
        part = gg.ridge_partial_correlations(s, 0.5)
        off = part[pair_arrays(25)]
        assert np.abs(off).max() < 1.0
        np.testing.assert_allclose(np.diagonal(part), 1.0)

    def test_requires_positive_penalty(self):
        with pytest.raises(ValueError):
            gg.ridge_partial_correlations(np.eye(3), 0.0)


class TestReconstruct:
    def test_tiny_alpha_decides_nothing(self, rng):
        data = gg.DataMatrix(rng.standard_normal((40, 15)))
        scores = gg.ggmridge_scores(data, lambda_r=1.0, null_reps=5, seed=3)
        est = gg.ridge_decisions_at(scores, 1e-12)
        assert est.edge_count == 0  # smallest possible p-value is 1/(1+pool)

    def test_null_calibration(self):
        fracs = []
        cfg = gg.RidgeConfig(lambda_r=1.0, alpha_r=0.05, null_reps=20)
        for seed in range(8):
            data = gg.sample_gaussian(np.eye(30), 50, seed)
            est = gg.ggmridge_reconstruct(data, cfg, seed=seed + 500, center=False)
            fracs.append(est.decided.mean())
        assert 0.01 <= np.mean(fracs) <= 0.12

    def test_chain_power(self):
        adj = gg.chain_graph(10)
        truth = adj.matrix[pair_arrays(10)]
        cfg = gg.RidgeConfig(lambda_r=1.0, alpha_r=0.01, null_reps=20)
        for seed in range(5):
            _, data = gg.synthesize_dataset(adj, 10_000, seed)
            est = gg.ggmridge_reconstruct(data, cfg, seed=seed, center=False)
            assert np.all(est.decided[truth]), "every true edge should be found"
            false_rate = est.decided[~truth].mean()
            assert false_rate <= 0.25  # fixed-alpha bias at huge n stays bounded

    def test_deterministic(self, rng):
        data = gg.DataMatrix(rng.standard_normal((25, 12)))
        cfg = gg.RidgeConfig(lambda_r=1.0, alpha_r=0.1, null_reps=10)
        a = gg.ggmridge_reconstruct(data, cfg, seed=42)
        b = gg.ggmridge_reconstruct(data, cfg, seed=42)
        np.testing.assert_array_equal(a.p_value, b.p_value)
        np.testing.assert_array_equal(a.decided, b.decided)
        c = gg.ggmridge_reconstruct(data, cfg, seed=43)
        assert not np.array_equal(a.p_value, c.p_value)

    def test_relabeling_invariance_with_adjusted_null(self, rng):
        adj = gg.generate_graph("er", 8, 21)
        _, data = gg.synthesize_dataset(adj, 60, 5)
        cfg = gg.RidgeConfig(lambda_r=1.0, alpha_r=0.1, null_reps=10)
        perms = draw_null_permutations(60, 8, 10, 99)
        est = gg.ggmridge_reconstruct(data, cfg, center=False, null_perms=perms)

        relabel = rng.permutation(8)
        data_perm = gg.DataMatrix(data.values[:, relabel])
        est_perm = gg.ggmridge_reconstruct(
            data_perm, cfg, center=False, null_perms=perms[:, relabel, :]
        )
        back = est_perm.relabeled(relabel)
        np.testing.assert_array_equal(back.decided, est.decided)
        np.testing.assert_allclose(back.p_value, est.p_value, atol=1e-12)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            gg.RidgeConfig(lambda_r=0.0)
        with pytest.raises(ValueError):
            gg.RidgeConfig(alpha_r=1.0)
        with pytest.raises(ValueError):
            gg.RidgeConfig(null_reps=0)

    def test_pvalues_monotone_in_z(self, rng):
        data = gg.DataMatrix(rng.standard_normal((30, 10)))
        scores = gg.ggmridge_scores(data, lambda_r=1.0, null_reps=10, seed=0)
        order = np.argsort(-np.abs(scores.z))
        assert np.all(np.diff(scores.p_value[order]) >= 0)
