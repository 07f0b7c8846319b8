"""Dense symmetric / SPD matrix primitives used by every estimator."""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NonpositiveDiagonal, NotPositiveDefinite

# A Cholesky pivot (squared factor diagonal) at or below this value is
# treated as numerically singular.
PIVOT_TOL = 1e-12


def as_symmetric(m: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Validate that `m` is a finite square symmetric matrix and return it
    as a float64 array (symmetrized exactly from its upper triangle)."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if not np.allclose(a, a.T, rtol=0.0, atol=tol * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    upper = np.triu(a)
    return upper + np.triu(a, k=1).T


def cholesky_spd(m: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of an SPD matrix.

    Raises NotPositiveDefinite if the factorization fails or any pivot
    (squared diagonal of the factor) is <= PIVOT_TOL.
    """
    a = np.asarray(m, dtype=np.float64)
    try:
        lower = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    piv = np.diagonal(lower) ** 2
    if piv.min() <= PIVOT_TOL:
        raise NotPositiveDefinite(
            f"Cholesky pivot {piv.min():.3e} below tolerance {PIVOT_TOL:.0e}"
        )
    return lower


def invert_spd(m: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix via Cholesky.

    The result is symmetrized so round-off cannot break symmetry.
    """
    lower = cholesky_spd(m)
    ident = np.eye(lower.shape[0])
    # L L^T x = I  =>  x = L^-T (L^-1 I)
    y = solve_triangular(lower, ident, lower=True)
    inv = solve_triangular(lower.T, y, lower=False)
    return (inv + inv.T) / 2.0


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix (any definiteness)."""
    a = as_symmetric(m)
    return float(np.linalg.eigvalsh(a)[0])


def scale_matrix(m: np.ndarray) -> np.ndarray:
    """Rescale a symmetric matrix to unit diagonal:
    out[i, j] = m[i, j] / sqrt(m[i, i] * m[j, j]).

    Raises NonpositiveDiagonal if any diagonal entry is <= 0.
    """
    a = np.asarray(m, dtype=np.float64)
    d = np.diagonal(a)
    bad = np.nonzero(d <= 0.0)[0]
    if bad.size:
        raise NonpositiveDiagonal(int(bad[0]), float(d[bad[0]]))
    inv_sqrt = 1.0 / np.sqrt(d)
    out = a * inv_sqrt[:, None] * inv_sqrt[None, :]
    np.fill_diagonal(out, 1.0)
    return out


def is_spd(m: np.ndarray) -> bool:
    """True when `m` factorizes with all Cholesky pivots above tolerance."""
    try:
        cholesky_spd(m)
    except NotPositiveDefinite:
        return False
    return True
