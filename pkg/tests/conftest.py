"""Shared helpers: random SPD matrices and regression-residual oracles."""

import numpy as np
import pytest


def random_spd(rng: np.random.Generator, p: int, jitter: float = 0.5) -> np.ndarray:
    """A well-conditioned random SPD matrix."""
    a = rng.standard_normal((p, p))
    m = a @ a.T / p + (jitter + 0.1) * np.eye(p)
    return (m + m.T) / 2.0


def partial_corr_from_precision(omega: np.ndarray, i: int, j: int) -> float:
    """-omega_ij / sqrt(omega_ii * omega_jj)."""
    return float(-omega[i, j] / np.sqrt(omega[i, i] * omega[j, j]))


def population_residual_partial_corr(sigma: np.ndarray, i: int, j: int) -> float:
    """Partial correlation of variables i and j given all others, computed
    from the population covariance through the conditional covariance of
    (i, j) given the rest. Independent of any precision-matrix identity."""
    p = sigma.shape[0]
    rest = [k for k in range(p) if k not in (i, j)]
    s_ab = sigma[np.ix_([i, j], [i, j])]
    if not rest:
        cond = s_ab
    else:
        s_az = sigma[np.ix_([i, j], rest)]
        s_zz = sigma[np.ix_(rest, rest)]
        cond = s_ab - s_az @ np.linalg.solve(s_zz, s_az.T)
    return float(cond[0, 1] / np.sqrt(cond[0, 0] * cond[1, 1]))


def sample_residual_partial_corr(x: np.ndarray, i: int, j: int) -> float:
    """Correlation of least-squares residuals of columns i and j regressed
    (with intercept) on all remaining columns."""
    n, p = x.shape
    rest = [k for k in range(p) if k not in (i, j)]
    design = np.column_stack([np.ones(n)] + [x[:, k] for k in rest])
    target = x[:, [i, j]]
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    resid = target - design @ coef
    r = np.corrcoef(resid[:, 0], resid[:, 1])[0, 1]
    return float(r)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
