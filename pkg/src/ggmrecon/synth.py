"""Turn a ground-truth graph into a covariance matrix and Gaussian samples.

The recipe: give every edge a random weight u * delta with u ~ Uniform(0.4, 0.8)
and delta a fair sign, shift the diagonal by |min eigenvalue| + 0.05 to force
positive definiteness, invert, and apply a random diagonal congruence with
entries from Uniform(1, 5). Zero off-diagonal entries of the precision matrix
survive all of these steps, so the conditional-independence pattern of the
sampled Gaussian is exactly the generated graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import AdjacencyMatrix
from .linalg import cholesky_spd, invert_spd, min_eigenvalue
from .stats import DataMatrix

DIAGONAL_SHIFT = 0.05
EDGE_WEIGHT_LOW = 0.4
EDGE_WEIGHT_HIGH = 0.8
CONGRUENCE_LOW = 1.0
CONGRUENCE_HIGH = 5.0


@dataclass(frozen=True)
class SynthesisDraw:
    """One realized precision/covariance pair for a ground-truth graph."""

    adjacency: AdjacencyMatrix
    omega_raw: np.ndarray            # edge weights only, zero diagonal
    omega: np.ndarray                # omega_raw + (|min eig| + 0.05) I, SPD
    sigma: np.ndarray | None = None  # D omega^-1 D after diagonal congruence
    congruence: np.ndarray | None = None  # the p-vector forming D


def synthesize_precision(adj: AdjacencyMatrix, seed) -> SynthesisDraw:
    """Draw edge weights and build the shifted, positive definite precision.

    Each unordered edge {i, j} gets a single draw u * delta assigned
    symmetrically. The diagonal shift |min eig| + 0.05 is applied
    unconditionally, so the smallest eigenvalue of the result is at least
    0.05 even when the raw weight matrix is already positive definite.
    """
    rng = np.random.default_rng(seed)
    p = adj.p
    iu = np.triu_indices(p, k=1)
    edge_mask = adj.matrix[iu]
    m = int(edge_mask.sum())
    weights = np.zeros(iu[0].size)
    u = rng.uniform(EDGE_WEIGHT_LOW, EDGE_WEIGHT_HIGH, size=m)
    delta = rng.integers(0, 2, size=m) * 2 - 1
    weights[edge_mask] = u * delta
    omega_raw = np.zeros((p, p))
    omega_raw[iu] = weights
    omega_raw += omega_raw.T
    shift = abs(min_eigenvalue(omega_raw)) + DIAGONAL_SHIFT
    omega = omega_raw + shift * np.eye(p)
    return SynthesisDraw(adjacency=adj, omega_raw=omega_raw, omega=omega)


def covariance_from_precision(draw: SynthesisDraw, seed) -> SynthesisDraw:
    """Complete a draw with sigma = D omega^-1 D, D = diag(Uniform(1,5)^p)."""
    rng = np.random.default_rng(seed)
    p = draw.adjacency.p
    u2 = rng.uniform(CONGRUENCE_LOW, CONGRUENCE_HIGH, size=p)
    omega_inv = invert_spd(draw.omega)
    sigma = omega_inv * np.outer(u2, u2)
    sigma = (sigma + sigma.T) / 2.0
    return SynthesisDraw(
        adjacency=draw.adjacency,
        omega_raw=draw.omega_raw,
        omega=draw.omega,
        sigma=sigma,
        congruence=u2,
    )


def sample_gaussian(sigma: np.ndarray, n: int, seed) -> DataMatrix:
    """Draw n i.i.d. mean-zero Gaussian rows with covariance sigma.

    Rows are standard normal vectors pushed through the lower Cholesky
    factor, so output is deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    lower = cholesky_spd(np.asarray(sigma, dtype=np.float64))
    z = rng.standard_normal(size=(n, lower.shape[0]))
    return DataMatrix(z @ lower.T)


def synthesize_dataset(adj: AdjacencyMatrix, n: int, seed) -> tuple[SynthesisDraw, DataMatrix]:
    """Convenience pipeline: precision, covariance, then an n-row sample.

    Consumes three values from one seeded stream when `seed` is a Generator,
    or derives sequential stages from a fresh generator otherwise.
    """
    rng = np.random.default_rng(seed)
    draw = synthesize_precision(adj, rng)
    draw = covariance_from_precision(draw, rng)
    data = sample_gaussian(draw.sigma, n, rng)
    return draw, data
