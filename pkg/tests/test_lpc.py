import math

import numpy as np
import pytest

import ggmrecon as gg
from ggmrecon.edges import pair_index
from ggmrecon.errors import InsufficientSamples
from ggmrecon.lpc import lpc_rejects

from conftest import sample_residual_partial_corr


def _fake_corr(p: int) -> np.ndarray:
    c = np.eye(p)
    return c


class TestNeighborhood:
    def test_independent_columns_empty(self):
        x = np.random.default_rng(0).standard_normal((50, 20))
        corr = gg.pearson_matrix(x)
        z = gg.lpc_neighborhood(corr, 2, 7, 50, 1e-6)
        assert z.size == 0

    def test_cap_applies(self):
        # 200 significant candidates but n = 20: exactly floor(20/2) survive
        p = 203
        corr = _fake_corr(p)
        scores = 0.5 + 0.001 * np.arange(200)
        corr[0, 2:202] = scores
        corr[2:202, 0] = scores
        z = gg.lpc_neighborhood(corr, 0, 1, 20, 0.05)
        assert z.size == 10
        # the ten largest scores are the ten highest indices, best first
        np.testing.assert_array_equal(z, np.arange(201, 191, -1))

    def test_tie_break_smaller_index(self):
        p = 10
        corr = _fake_corr(p)
        for k in (3, 5, 8):
            corr[0, k] = corr[k, 0] = 0.9
        z = gg.lpc_neighborhood(corr, 0, 1, 8, 0.05)
        # cap is 4; only 3 candidates, all tied, returned in index order
        np.testing.assert_array_equal(z, [3, 5, 8])
        z2 = gg.lpc_neighborhood(corr, 0, 1, 5, 0.5)
        # cap 2 with a three-way tie keeps the two smallest indices
        np.testing.assert_array_equal(z2, [3, 5])

    def test_excludes_endpoints(self, rng):
        x = rng.standard_normal((40, 12))
        corr = gg.pearson_matrix(x)
        for i, j in ((0, 1), (3, 9), (10, 11)):
            z = gg.lpc_neighborhood(corr, i, j, 40, 0.999)
            assert i not in z and j not in z


class TestStatistic:
    def test_zero_rho(self):
        from ggmrecon.stats import two_sided_normal_pvalue

        assert gg.lpc_test_statistic(0.0, 4, 100) == 0.0
        assert float(two_sided_normal_pvalue(0.0)) == 1.0
        assert not lpc_rejects(0.0, 0.9999)

    def test_spec_case(self):
        stat = gg.lpc_test_statistic(0.5, 5, 58)
        assert stat == pytest.approx(3.8842, abs=5e-4)
        assert stat == pytest.approx(3.884180996060466, abs=1e-12)
        assert lpc_rejects(stat, 0.01)  # threshold 2.5758293035489004

    def test_borderline_pvalue(self):
        from ggmrecon.stats import two_sided_normal_pvalue

        p = float(two_sided_normal_pvalue(1.9600))
        assert p == pytest.approx(0.0500, abs=1e-4)
        assert lpc_rejects(1.9600, 0.05)       # p = 0.049996 < 0.05
        assert not lpc_rejects(1.9600, 0.049)

    def test_insufficient_df(self):
        with pytest.raises(InsufficientSamples):
            gg.lpc_test_statistic(0.3, 10, 13)


class TestPair:
    def test_empty_neighborhood_equals_pearson(self, rng):
        x = gg.DataMatrix(rng.standard_normal((60, 8)))
        corr = gg.pearson_matrix(x)
        cfg = gg.LpcConfig(alpha=1e-8, alpha_lpc=0.05)
        rho, z_size, p_value, _ = gg.lpc_pair(x, 1, 4, cfg, center=True)
        assert z_size == 0
        assert rho == pytest.approx(corr[1, 4], abs=1e-10)
        assert 0.0 <= p_value <= 1.0

    def test_matches_residual_oracle(self, rng):
        adj = gg.chain_graph(5)
        draw, data = gg.synthesize_dataset(adj, 4000, rng)
        cfg = gg.LpcConfig(alpha=0.999, alpha_lpc=0.01)
        for i, j in ((0, 1), (1, 3), (0, 4)):
            rho, z_size, _, _ = gg.lpc_pair(data, i, j, cfg, center=True)
            assert z_size == 3  # full conditioning at alpha ~ 1
            oracle = sample_residual_partial_corr(data.values, i, j)
            assert rho == pytest.approx(oracle, abs=2e-2)

    def test_insufficient_samples_raised(self, rng):
        x = gg.DataMatrix(rng.standard_normal((6, 5)))
        with pytest.raises(InsufficientSamples):
            gg.lpc_pair(x, 0, 1, gg.LpcConfig(alpha=0.999, alpha_lpc=0.05))


class TestReconstruct:
    def test_pair_count_complete(self, rng):
        x = gg.DataMatrix(rng.standard_normal((30, 9)))
        est = gg.lpc_reconstruct(x, gg.LpcConfig(alpha=0.1, alpha_lpc=0.05))
        assert est.statistic.size == 36
        assert est.method == "lpc"

    def test_chain_graph_majority(self):
        hits = {(0, 1): 0, (1, 2): 0, (0, 2): 0}
        cfg = gg.LpcConfig(alpha=0.1, alpha_lpc=0.01)
        for seed in range(20):
            adj = gg.chain_graph(3)
            _, data = gg.synthesize_dataset(adj, 10_000, seed)
            est = gg.lpc_reconstruct(data, cfg, center=False)
            for pair in hits:
                if est.decided[pair_index(3, *pair)]:
                    hits[pair] += 1
        assert hits[(0, 1)] > 10
        assert hits[(1, 2)] > 10
        assert hits[(0, 2)] < 10

    def test_false_positive_rate(self):
        fracs = []
        for seed in range(10):
            x = gg.sample_gaussian(np.eye(40), 50, seed)
            est = gg.lpc_reconstruct(
                x, gg.LpcConfig(alpha=0.05, alpha_lpc=0.05), center=False
            )
            fracs.append(est.decided.mean())
        assert 0.01 <= np.mean(fracs) <= 0.12

    def test_degenerate_column_is_undecidable_not_fatal(self, rng):
        base = rng.standard_normal((25, 6))
        base[:, 1] = base[:, 0]  # exact duplicate
        est = gg.lpc_reconstruct(
            gg.DataMatrix(base), gg.LpcConfig(alpha=0.2, alpha_lpc=0.05)
        )
        k = pair_index(6, 0, 1)
        assert math.isnan(est.statistic[k])
        assert not est.decided[k]
        assert est.statistic.size == 15

    def test_matches_single_pair_api(self, rng):
        x = gg.DataMatrix(rng.standard_normal((40, 7)))
        cfg = gg.LpcConfig(alpha=0.3, alpha_lpc=0.05)
        est = gg.lpc_reconstruct(x, cfg, center=True)
        for i, j in ((0, 3), (2, 6), (4, 5)):
            rho, z_size, p_value, decided = gg.lpc_pair(x, i, j, cfg, center=True)
            k = pair_index(7, i, j)
            stat = gg.lpc_test_statistic(rho, z_size, 40)
            assert est.statistic[k] == pytest.approx(stat, abs=1e-12)
            assert est.p_value[k] == pytest.approx(p_value, abs=1e-12)
            assert est.decided[k] == decided

    def test_undecidable_when_df_short(self, rng):
        # n = 6 gives cap 3 and df = 0 whenever 3 neighbors are kept
        x = gg.DataMatrix(rng.standard_normal((6, 5)))
        est = gg.lpc_reconstruct(x, gg.LpcConfig(alpha=0.999, alpha_lpc=0.05))
        assert np.isnan(est.statistic).any()
        assert not est.decided[np.isnan(est.statistic)].any()
