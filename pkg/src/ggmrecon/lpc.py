"""Local partial correlation estimator.

For every pair {i, j} a conditioning set is built from the variables whose
Pearson correlation with i or j is significant at level `alpha`, capped at
floor(n / 2) members by keeping those with the largest absolute correlation
to either endpoint. The partial correlation of i and j given that set is
estimated by inverting the local empirical covariance, then tested with the
variance-stabilized z statistic sqrt(n - |Z| - 3) * |atanh(rho)| against the
standard normal quantile at level `alpha_lpc`.

The pair statistics depend on `alpha` but not on `alpha_lpc`, so a sweep over
test levels reuses one `lpc_statistics` pass; see `lpc_decisions_at`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .edges import EdgeDecisionSet, pair_arrays
from .errors import (
    InsufficientSamples,
    NotPositiveDefinite,
    SingularLocalCovariance,
)
from .linalg import PIVOT_TOL, cholesky_spd
from .stats import (
    DataMatrix,
    empirical_covariance,
    fisher_z,
    norm_ppf,
    pearson_critical_r,
    pearson_matrix,
    two_sided_normal_pvalue,
)


@dataclass(frozen=True)
class LpcConfig:
    """Screening level `alpha` and edge-test level `alpha_lpc`, both in (0,1).

    The neighborhood cap floor(n / 2) is derived from the sample size, not
    configured.
    """

    alpha: float = 0.1
    alpha_lpc: float = 0.02

    def __post_init__(self):
        for name in ("alpha", "alpha_lpc"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")


def neighborhood_cap(n: int) -> int:
    return n // 2


def _ranked_neighborhood(
    absr: np.ndarray, sig: np.ndarray, i: int, j: int, cap: int
) -> np.ndarray:
    """Candidates significant for i or j, ranked by max(|r_ik|, |r_jk|)
    descending with index ascending as tie-break, truncated to `cap`."""
    cand = np.nonzero(sig[i] | sig[j])[0]
    cand = cand[(cand != i) & (cand != j)]
    if cand.size == 0:
        return cand
    scores = np.maximum(absr[i, cand], absr[j, cand])
    ranked = cand[np.lexsort((cand, -scores))]
    return ranked[:cap] if ranked.size > cap else ranked


def lpc_neighborhood(
    corr: np.ndarray, i: int, j: int, n: int, alpha: float
) -> np.ndarray:
    """Conditioning set for pair {i, j}, in ranked order.

    Never contains i or j; size never exceeds floor(n / 2).
    """
    if i == j:
        raise ValueError("need two distinct variables")
    if n < 5:
        raise InsufficientSamples(f"need n >= 5, got {n}")
    absr = np.abs(np.asarray(corr, dtype=np.float64)).copy()
    np.fill_diagonal(absr, 0.0)
    sig = absr > pearson_critical_r(n, alpha)
    return _ranked_neighborhood(absr, sig, i, j, neighborhood_cap(n))


def _conditional_rho(lower: np.ndarray) -> float:
    """Partial correlation of the final two variables from the trailing 2x2
    block of a Cholesky factor ordered [conditioning set..., i, j]."""
    tail = lower[-2:, -2:]
    c = tail @ tail.T
    return float(c[0, 1] / math.sqrt(c[0, 0] * c[1, 1]))


def _pair_scalar(
    s_full: np.ndarray, ranked: np.ndarray, i: int, j: int
) -> tuple[float, int]:
    """(rho, conditioning size) with the shrink-on-singular fallback:
    drop the lowest-ranked member until the local covariance factorizes."""
    members = list(ranked)
    while True:
        idx = [*members, i, j]
        sub = s_full[np.ix_(idx, idx)]
        try:
            lower = cholesky_spd(sub)
        except NotPositiveDefinite:
            if not members:
                raise SingularLocalCovariance(
                    f"2x2 covariance of pair ({i}, {j}) is singular"
                ) from None
            members.pop()
            continue
        return _conditional_rho(lower), len(members)


def lpc_test_statistic(rho: float, z_size: int, n: int) -> float:
    """sqrt(n - z_size - 3) * |atanh(rho)|; raises if the df is below 1."""
    df = n - z_size - 3
    if df < 1:
        raise InsufficientSamples(
            f"n - |Z| - 3 = {df} < 1 (n={n}, |Z|={z_size})"
        )
    return math.sqrt(df) * abs(fisher_z(rho))


def lpc_rejects(statistic: float, alpha_lpc: float) -> bool:
    return statistic > norm_ppf(1.0 - alpha_lpc / 2.0)


@dataclass(frozen=True)
class LpcStatistics:
    """Per-pair LPC statistics for one screening level, before thresholding."""

    p: int
    n: int
    alpha: float
    statistic: np.ndarray   # NaN where the pair is undecidable
    p_value: np.ndarray
    rho: np.ndarray
    z_sizes: np.ndarray
    names: list[str] | None = None


def _statistics_from_moments(
    s_full: np.ndarray,
    corr: np.ndarray,
    n: int,
    alpha: float,
    names: list[str] | None = None,
    batch: int = 20000,
) -> LpcStatistics:
    p = s_full.shape[0]
    cap = neighborhood_cap(n)
    absr = np.abs(corr).copy()
    np.fill_diagonal(absr, 0.0)
    sig = absr > pearson_critical_r(n, alpha)
    ii, jj = pair_arrays(p)
    m = ii.size

    neighborhoods: list[np.ndarray] = [
        _ranked_neighborhood(absr, sig, int(ii[k]), int(jj[k]), cap)
        for k in range(m)
    ]
    sizes = np.fromiter((nb.size for nb in neighborhoods), dtype=np.int64, count=m)
    rho = np.full(m, np.nan)
    z_out = sizes.astype(np.int64).copy()

    for s in np.unique(sizes):
        sel = np.nonzero(sizes == s)[0]
        if n - s - 3 < 1:
            continue  # undecidable: too few samples for this neighborhood size
        width = int(s) + 2
        for lo in range(0, sel.size, batch):
            chunk = sel[lo : lo + batch]
            idx = np.empty((chunk.size, width), dtype=np.int64)
            for row, k in enumerate(chunk):
                idx[row, : int(s)] = neighborhoods[k]
                idx[row, int(s)] = ii[k]
                idx[row, int(s) + 1] = jj[k]
            blocks = s_full[idx[:, :, None], idx[:, None, :]]
            try:
                lowers = np.linalg.cholesky(blocks)
                piv_ok = (np.diagonal(lowers, axis1=1, axis2=2) ** 2).min(axis=1) > PIVOT_TOL
            except np.linalg.LinAlgError:
                lowers = None
                piv_ok = np.zeros(chunk.size, dtype=bool)
            if lowers is not None and piv_ok.any():
                tails = lowers[piv_ok][:, -2:, -2:]
                c = tails @ tails.transpose(0, 2, 1)
                rho[chunk[piv_ok]] = c[:, 0, 1] / np.sqrt(c[:, 0, 0] * c[:, 1, 1])
            for k in chunk[~piv_ok]:
                try:
                    rho[k], z_out[k] = _pair_scalar(
                        s_full, neighborhoods[k], int(ii[k]), int(jj[k])
                    )
                except SingularLocalCovariance:
                    pass  # stays undecidable

    df = n - z_out - 3
    with np.errstate(invalid="ignore"):
        stat = np.where(
            np.isnan(rho) | (df < 1),
            np.nan,
            np.sqrt(np.maximum(df, 1)) * np.abs(np.arctanh(rho)),
        )
    pval = np.where(np.isnan(stat), np.nan, two_sided_normal_pvalue(stat))
    return LpcStatistics(
        p=p, n=n, alpha=alpha, statistic=stat, p_value=pval,
        rho=rho, z_sizes=z_out, names=names,
    )


def lpc_statistics(data, alpha: float, center: bool = True) -> LpcStatistics:
    """Compute every pair's local partial correlation statistic once."""
    corr = pearson_matrix(data)
    s_full = empirical_covariance(data, center=center)
    is_dm = isinstance(data, DataMatrix)
    n = data.n if is_dm else np.asarray(data).shape[0]
    return _statistics_from_moments(s_full, corr, n, alpha,
                                    names=data.names if is_dm else None)


def lpc_decisions_at(stats: LpcStatistics, alpha_lpc: float) -> EdgeDecisionSet:
    """Threshold precomputed statistics at an edge-test level."""
    threshold = norm_ppf(1.0 - alpha_lpc / 2.0)
    with np.errstate(invalid="ignore"):
        decided = np.where(np.isnan(stats.statistic), False, stats.statistic > threshold)
    return EdgeDecisionSet(
        p=stats.p,
        statistic=stats.statistic,
        p_value=stats.p_value,
        decided=decided.astype(bool),
        method="lpc",
        names=stats.names,
    )


def lpc_pair(
    data: DataMatrix, i: int, j: int, cfg: LpcConfig, center: bool = True
) -> tuple[float, int, float, bool]:
    """(rho_hat, conditioning size, p-value, rejected) for one pair.

    Raises InsufficientSamples when n - |Z| - 3 < 1 and
    SingularLocalCovariance when even the 2x2 covariance cannot be factorized.
    """
    corr = pearson_matrix(data)
    s_full = empirical_covariance(data, center=center)
    ranked = lpc_neighborhood(corr, i, j, data.n, cfg.alpha)
    if data.n - ranked.size - 3 < 1:
        raise InsufficientSamples(
            f"n - |Z| - 3 = {data.n - ranked.size - 3} < 1"
        )
    rho, z_size = _pair_scalar(s_full, ranked, i, j)
    stat = lpc_test_statistic(rho, z_size, data.n)
    p_value = float(two_sided_normal_pvalue(stat))
    return rho, z_size, p_value, lpc_rejects(stat, cfg.alpha_lpc)


def lpc_reconstruct(data: DataMatrix, cfg: LpcConfig, center: bool = True) -> EdgeDecisionSet:
    """Decide every pair; per-pair failures become undecided entries
    (NaN statistic, decision False) instead of aborting the run."""
    return lpc_decisions_at(lpc_statistics(data, cfg.alpha, center=center), cfg.alpha_lpc)
