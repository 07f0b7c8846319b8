"""Sample moments, correlation, and Gaussian test helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc
from scipy.stats import t as student_t

from .errors import OutOfRange, TooFewSamples, ZeroVariance


@dataclass(frozen=True)
class DataMatrix:
    """An n x p sample matrix: rows are observations, columns are variables."""

    values: np.ndarray
    names: list[str] | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected a 2-d array, got {v.ndim}-d")
        n, p = v.shape
        if n < 2:
            raise TooFewSamples(f"need at least 2 sample rows, got {n}")
        if p < 2:
            raise ValueError(f"need at least 2 variables, got {p}")
        if not np.all(np.isfinite(v)):
            raise ValueError("data matrix has non-finite entries")
        if self.names is not None and len(self.names) != p:
            raise ValueError(f"{len(self.names)} names for {p} columns")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, DataMatrix) else np.asarray(x, dtype=np.float64)


def empirical_covariance(x, center: bool = True) -> np.ndarray:
    """Second-moment matrix X'X / n, optionally after column mean-centering.

    The divisor is n (maximum-likelihood convention), not n - 1.
    """
    v = _values(x)
    if center:
        v = v - v.mean(axis=0, keepdims=True)
    s = v.T @ v / v.shape[0]
    return (s + s.T) / 2.0


def pearson_matrix(x) -> np.ndarray:
    """Sample Pearson correlation matrix with a unit diagonal.

    Raises ZeroVariance naming the first constant column.
    """
    v = _values(x)
    centered = v - v.mean(axis=0, keepdims=True)
    norms = np.sqrt((centered**2).sum(axis=0))
    bad = np.nonzero(norms == 0.0)[0]
    if bad.size:
        raise ZeroVariance(int(bad[0]))
    r = (centered.T @ centered) / np.outer(norms, norms)
    r = np.clip((r + r.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(r, 1.0)
    return r


def standardize_columns(x: DataMatrix) -> DataMatrix:
    """Center each column and rescale it to unit sample variance."""
    v = x.values
    centered = v - v.mean(axis=0, keepdims=True)
    sd = centered.std(axis=0)
    bad = np.nonzero(sd == 0.0)[0]
    if bad.size:
        raise ZeroVariance(int(bad[0]))
    return DataMatrix(centered / sd, names=x.names)


def fisher_z(r: float) -> float:
    """Variance-stabilizing transform 0.5 * log((1 + r) / (1 - r))."""
    if not abs(r) < 1.0:
        raise OutOfRange(f"correlation must satisfy |r| < 1, got {r!r}")
    return math.atanh(r)


def norm_cdf(x):
    """Standard normal CDF, vectorized (via the complementary error function)."""
    return 0.5 * erfc(-np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


# Coefficients of Acklam's rational approximation to the inverse normal CDF.
_PPF_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_PPF_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_PPF_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_PPF_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)
_PPF_LOW = 0.02425


def norm_ppf(p: float) -> float:
    """Inverse standard normal CDF.

    Rational approximation refined with one Halley step against the
    erfc-based CDF. The upper half mirrors through 1 - p (exact for
    p >= 0.5), so the refinement always runs where the CDF is accurate;
    absolute error stays far below 1e-9 over (0, 1).
    """
    if not 0.0 < p < 1.0:
        raise OutOfRange(f"probability must lie in (0, 1), got {p!r}")
    if p > 0.5:
        return -norm_ppf(1.0 - p)
    a, b, c, d = _PPF_A, _PPF_B, _PPF_C, _PPF_D
    if p < _PPF_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    else:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    # One Halley refinement step; x <= 0 here so erfc sees a positive argument.
    err = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = err * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def two_sided_normal_pvalue(stat):
    """p = 2 * (1 - Phi(|stat|)) for a standard-normal test statistic."""
    return erfc(np.abs(np.asarray(stat, dtype=np.float64)) / math.sqrt(2.0))


def pearson_critical_r(n: int, alpha: float) -> float:
    """Two-sided significance cutoff on |r| for a sample Pearson correlation.

    Under Gaussianity, r * sqrt((n - 2) / (1 - r^2)) follows a Student-t
    distribution with n - 2 degrees of freedom when the true correlation is
    zero; |r| above the returned cutoff rejects at level `alpha`.
    """
    if n < 3:
        raise TooFewSamples(f"need n >= 3 for a correlation test, got {n}")
    if not 0.0 < alpha < 1.0:
        raise OutOfRange(f"alpha must lie in (0, 1), got {alpha!r}")
    t_crit = float(student_t.ppf(1.0 - alpha / 2.0, n - 2))
    return t_crit / math.sqrt(n - 2 + t_crit**2)
