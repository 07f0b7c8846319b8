"""Per-pair reconstruction decisions over all unordered variable pairs.

Pairs are stored in row-major upper-triangle order: (0,1), (0,2), ...,
(0,p-1), (1,2), ... which matches numpy's triu_indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


def pair_count(p: int) -> int:
    return p * (p - 1) // 2


def pair_arrays(p: int) -> tuple[np.ndarray, np.ndarray]:
    """The (i, j) index vectors for all pairs in canonical order."""
    return np.triu_indices(p, k=1)


def pair_index(p: int, i: int, j: int) -> int:
    """Position of pair {i, j} (i < j) in canonical order."""
    if not 0 <= i < j < p:
        raise ValueError(f"need 0 <= i < j < p, got i={i}, j={j}, p={p}")
    return i * (2 * p - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class EdgeDecisionSet:
    """Result of one reconstruction: per-pair statistic, p-value, decision.

    `p_value` is None for methods without one (penalized-likelihood edge
    selection). NaN statistic marks a pair the method could not decide.
    """

    p: int
    statistic: np.ndarray
    decided: np.ndarray
    p_value: np.ndarray | None = None
    method: str = ""
    names: list[str] | None = None

    def __post_init__(self):
        m = pair_count(self.p)
        stat = np.asarray(self.statistic, dtype=np.float64)
        dec = np.asarray(self.decided, dtype=bool)
        if stat.shape != (m,) or dec.shape != (m,):
            raise DimensionMismatch(
                f"expected {m} pairs for p={self.p}, got "
                f"statistic {stat.shape}, decided {dec.shape}"
            )
        object.__setattr__(self, "statistic", stat)
        object.__setattr__(self, "decided", dec)
        if self.p_value is not None:
            pv = np.asarray(self.p_value, dtype=np.float64)
            if pv.shape != (m,):
                raise DimensionMismatch(f"p_value shape {pv.shape}, expected ({m},)")
            object.__setattr__(self, "p_value", pv)
        if self.names is not None and len(self.names) != self.p:
            raise ValueError(f"{len(self.names)} names for p={self.p}")

    @property
    def edge_count(self) -> int:
        return int(self.decided.sum())

    def decided_pairs(self) -> list[tuple[int, int]]:
        ii, jj = pair_arrays(self.p)
        sel = self.decided
        return list(zip(ii[sel].tolist(), jj[sel].tolist()))

    def degrees(self) -> np.ndarray:
        """Node degrees in the decided-edge graph."""
        ii, jj = pair_arrays(self.p)
        deg = np.zeros(self.p, dtype=np.int64)
        np.add.at(deg, ii[self.decided], 1)
        np.add.at(deg, jj[self.decided], 1)
        return deg

    def active_node_count(self) -> int:
        """Number of vertices with degree >= 1."""
        return int((self.degrees() > 0).sum())

    def to_matrix(self) -> np.ndarray:
        """Decided edges as a symmetric boolean matrix."""
        a = np.zeros((self.p, self.p), dtype=bool)
        ii, jj = pair_arrays(self.p)
        a[ii[self.decided], jj[self.decided]] = True
        return a | a.T

    def relabeled(self, perm: np.ndarray) -> "EdgeDecisionSet":
        """The same decisions with variable k renamed to perm[k]."""
        perm = np.asarray(perm)
        ii, jj = pair_arrays(self.p)
        ni, nj = perm[ii], perm[jj]
        lo, hi = np.minimum(ni, nj), np.maximum(ni, nj)
        dest = lo * (2 * self.p - lo - 1) // 2 + (hi - lo - 1)
        order = np.empty_like(dest)
        order[dest] = np.arange(dest.size)
        names = None
        if self.names is not None:
            names = [""] * self.p
            for k, name in enumerate(self.names):
                names[int(perm[k])] = name
        return EdgeDecisionSet(
            p=self.p,
            statistic=self.statistic[order],
            decided=self.decided[order],
            p_value=None if self.p_value is None else self.p_value[order],
            method=self.method,
            names=names,
        )
